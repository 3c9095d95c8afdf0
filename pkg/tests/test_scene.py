# standard libraries
import json

# third party libraries
import pytest

# harmonicbound libraries
from harmonicbound.errors import SceneError
from harmonicbound.geometry.base import Configuration
from harmonicbound.geometry.configuration import extremal_configuration
from harmonicbound.models.conformal import MobiusDiskAuto, transport_continuum
from harmonicbound.scene import SceneFile, load_configuration, load_scene, parse_scene

STAR_SCENE = {"schema_version": 1, "n": 3, "rho": 0.5, "generator": {"kind": "star", "theta": 0.25}}


def test_star_generator_builds_extremal_configuration():
    cfg = parse_scene(json.dumps(STAR_SCENE)).to_configuration()
    assert cfg == extremal_configuration(3, 0.5, 0.25)


def test_explicit_scene_overrides_points():
    scene = {
        "schema_version": 1,
        "n": 2,
        "rho": 0.5,
        "points": [[0.5, 0.0], [-0.5, 0.0]],
        "continuum": {
            "segments": [[[0.0, -1.0], [0.0, 1.0]]],
            "arcs": [{"center": [0.0, 0.0], "radius": 0.25, "angle0": 0.5, "angle1": 2.0}],
        },
    }
    cfg = parse_scene(json.dumps(scene)).to_configuration()
    assert cfg.points[1].z == -0.5
    assert len(cfg.continuum.arcs) == 1


def test_perturbed_star_generator():
    scene = {
        "schema_version": 1,
        "n": 2,
        "rho": 0.5,
        "generator": {
            "kind": "perturbed_star",
            "spoke_angle_offsets": [0.1, 0.0],
            "joint_lateral_offsets": [[0.0, 0.05], [0.0, 0.0]],
        },
    }
    cfg = parse_scene(json.dumps(scene)).to_configuration()
    assert len(cfg.continuum.segments) == 4


@pytest.mark.parametrize(
    "change, field",
    [
        ({"rho": 2.0}, "rho"),
        ({"colour": "red"}, "colour"),
        ({"schema_version": 2}, "schema_version"),
        ({"n": 1}, "n"),
    ],
)
def test_invalid_scenes_name_the_field(change, field):
    with pytest.raises(SceneError) as info:
        parse_scene(json.dumps({**STAR_SCENE, **change}))
    assert info.value.field == field


def test_scene_needs_exactly_one_continuum_source():
    both = {**STAR_SCENE, "continuum": {"segments": [[[0.0, -1.0], [0.0, 1.0]]]}}
    with pytest.raises(SceneError, match="exactly one"):
        parse_scene(json.dumps(both))
    neither = {key: value for key, value in STAR_SCENE.items() if key != "generator"}
    with pytest.raises(SceneError, match="exactly one"):
        parse_scene(json.dumps(neither))


def test_malformed_json():
    with pytest.raises(SceneError) as info:
        parse_scene('{"schema_version": 1, "n": ')
    assert info.value.field is None


def test_points_off_the_circle_are_reported():
    scene = {**STAR_SCENE, "points": [[0.5, 0.0], [0.0, 0.4], [-0.5, 0.0]]}
    with pytest.raises(SceneError) as info:
        parse_scene(json.dumps(scene)).to_configuration()
    assert info.value.field == "points"


def test_disconnected_continuum_is_reported():
    scene = {
        "schema_version": 1,
        "n": 2,
        "rho": 0.5,
        "continuum": {"segments": [[[0.0, 0.1], [0.0, 1.0]], [[0.0, -0.1], [0.0, -1.0]]]},
    }
    with pytest.raises(SceneError) as info:
        parse_scene(json.dumps(scene)).to_configuration()
    assert info.value.field == "continuum"


def test_configuration_round_trip(tmp_path):
    base = extremal_configuration(3, 0.5)
    m = MobiusDiskAuto.to_origin(0.1 + 0.2j)
    cfg = Configuration(n=3, rho=0.5, points=base.points, continuum=transport_continuum(base.continuum, m))
    path = tmp_path / "scene.json"
    path.write_text(SceneFile.from_configuration(cfg).model_dump_json(indent=2))
    assert load_configuration(path) == cfg


def test_missing_file(tmp_path):
    with pytest.raises(SceneError, match="cannot read"):
        load_scene(tmp_path / "absent.json")
