# standard libraries
import io
import json

# third party libraries
import pandas as pd
import pytest

# harmonicbound libraries
from harmonicbound.cli import cli
from harmonicbound.models.harmonic_measure import extremal_measure

WALKS = ["--samples", "4096", "--epsilon", "1e-3", "--seed", "7"]


def _write_scene(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def star_scene(tmp_path):
    return _write_scene(tmp_path, "star.json", {"schema_version": 1, "n": 2, "rho": 0.5, "generator": {"kind": "star"}})


def test_estimate_csv(star_scene, capsys):
    assert cli(["estimate", star_scene, "1", *WALKS]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ["k", "mean", "stderr", "samples", "hit_E", "hit_circle", "aborted"]
    assert frame.loc[0, "samples"] == 4096
    assert abs(frame.loc[0, "mean"] - extremal_measure(2, 0.5)) <= 4 * frame.loc[0, "stderr"]


def test_estimate_is_byte_identical(star_scene, capsys):
    cli(["estimate", star_scene, "2", *WALKS])
    first = capsys.readouterr().out
    cli(["estimate", star_scene, "2", *WALKS])
    assert capsys.readouterr().out == first


def test_estimate_json_omits_wall_time(star_scene, capsys):
    assert cli(["estimate", star_scene, "1", *WALKS, "--out", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert "wall_time" not in report
    assert report["seed"] == 7
    assert report["parameters"]["k"] == 1

    assert cli(["--timing", "estimate", star_scene, "1", *WALKS, "--out", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["wall_time"] > 0


def test_estimate_writes_output_file(star_scene, tmp_path, capsys):
    target = tmp_path / "omega.csv"
    assert cli(["estimate", star_scene, "1", *WALKS, "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().startswith("k,mean,")


def test_invalid_scene_exits_2_with_field(tmp_path, capsys):
    bad = _write_scene(tmp_path, "bad.json", {"schema_version": 1, "n": 2, "rho": 1.5, "generator": {"kind": "star"}})
    assert cli(["estimate", bad, "1", *WALKS]) == 2
    diagnostic = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert diagnostic["error"] == "SceneError"
    assert diagnostic["field"] == "rho"


def test_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert cli(["render", str(path), "--out", str(tmp_path / "x.svg")]) == 2
    assert "SceneError" in capsys.readouterr().err


def test_check_bound_point_on_continuum(tmp_path, capsys):
    scene = _write_scene(
        tmp_path,
        "on_e.json",
        {"schema_version": 1, "n": 2, "rho": 0.5, "points": [[0.0, 0.5], [0.0, -0.5]], "generator": {"kind": "star"}},
    )
    assert cli(["check-bound", scene, *WALKS]) == 2
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"] == "PointOnContinuum"


def test_check_bound_reports_rhs(tmp_path, capsys):
    payload = {"schema_version": 1, "n": 3, "rho": 0.5, "generator": {"kind": "star"}}
    scene = _write_scene(tmp_path, "star3.json", payload)
    code = cli(["check-bound", scene, *WALKS, "--out", "json"])
    report = json.loads(capsys.readouterr().out)
    assert report["bound"]["rhs"] == pytest.approx(2.0794415416798357)
    assert len(report["estimates"]) == 3
    assert code == (1 if report["bound"]["verdict"] == "VIOLATION_CANDIDATE" else 0)


def test_check_bound_step_cap_is_not_a_violation(tmp_path, capsys):
    scene = _write_scene(tmp_path, "star3.json", {"schema_version": 1, "n": 3, "rho": 0.5, "generator": {"kind": "star"}})
    assert cli(["check-bound", scene, "--samples", "1000", "--max-steps", "1", "--out", "json"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert json.loads(captured.err.strip().splitlines()[-1])["error"] == "WalksExhausted"


def test_identities_grid_and_tolerance(capsys):
    assert cli(["identities", "--theta-grid", "0.5:1.0:0.25"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert (frame["check"] == "integral_identity").sum() == 3
    assert frame["passed"].all()

    assert cli(["identities", "--theta-grid", "0.5:1.0:0.25", "--tol", "1e-16"]) == 1
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert not frame["passed"].all()


def test_render_is_deterministic(star_scene, tmp_path):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli(["render", star_scene, "--out", str(first)]) == 0
    assert cli(["render", star_scene, "--out", str(second)]) == 0
    text = first.read_text()
    assert text.startswith("<?xml")
    assert "<svg" in text
    assert first.read_bytes() == second.read_bytes()


def test_search_history_csv(capsys):
    code = cli(["search", "2", "0.5", "--budget", "50", "--samples", "256", "--epsilon", "1e-2", "--out", "csv"])
    assert code == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ["iteration", "objective"]
    assert frame["objective"].is_monotonic_decreasing
