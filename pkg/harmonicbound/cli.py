"""
Command-line front end: ``harmonicbound estimate | check-bound | identities | search | render``.

Exit codes: 0 on success, 1 when a verification fails (identity residual above tolerance or a bound
violation candidate), 2 on invalid input, with a one-line JSON diagnostic on stderr.
"""

# standard libraries
import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

# third party libraries
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

# harmonicbound libraries
from harmonicbound.errors import HarmonicBoundError, SceneError
from harmonicbound.geometry.base import Configuration
from harmonicbound.geometry.configuration import verify_configuration
from harmonicbound.models.extremal_bound import (
    DEFAULT_THETA_GRID,
    BoundReport,
    Verdict,
    check_inequality,
    identity_suite,
)
from harmonicbound.models.harmonic_measure import Estimate, WosParams, wos_estimate
from harmonicbound.models.search import Objective, minimize
from harmonicbound.render import render_configuration
from harmonicbound.scene import load_configuration

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class RunReport(BaseModel):
    """Everything a command computed, in a reproducible form"""

    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    command: List[str] = Field(..., description="Command echo")
    parameters: Dict[str, Any] = Field(..., description="Resolved parameters")
    seed: int = Field(..., description="Seed of the walks")
    estimates: List[Estimate] = Field(default_factory=list, description="Per-k estimates")
    bound: Optional[BoundReport] = Field(None, description="Both sides of the inequality")
    wall_time: Optional[float] = Field(None, description="Seconds spent; only reported with --timing")


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _params(args: argparse.Namespace) -> WosParams:
    return WosParams(epsilon=args.epsilon, max_steps=args.max_steps, samples=args.samples, seed=args.seed)


def _checked_configuration(path: Path) -> Configuration:
    cfg = load_configuration(path)
    check = verify_configuration(cfg)
    if not check:
        raise SceneError(f"the continuum does not separate the marked points: {check.message}", "continuum")
    return cfg


def _estimates_frame(estimates: List[Estimate], first_k: int = 1) -> pd.DataFrame:
    frame = pd.DataFrame([e.model_dump() for e in estimates])
    frame.insert(0, "k", range(first_k, first_k + len(estimates)))
    return frame


def _report_text(report: RunReport, fmt: str, frame: pd.DataFrame, timing: bool) -> str:
    if fmt == "csv":
        return frame.to_csv(index=False)
    exclude = None if timing else {"wall_time"}
    return report.model_dump_json(indent=2, exclude=exclude) + "\n"


def cmd_estimate(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    cfg = _checked_configuration(args.scene)
    params = _params(args)
    estimate = wos_estimate(cfg, args.k, params, progress=args.progress)
    report = RunReport(
        command=args.argv,
        parameters={"scene": str(args.scene), "k": args.k, **params.model_dump()},
        seed=params.seed,
        estimates=[estimate],
        wall_time=time.perf_counter() - started,
    )
    _emit(_report_text(report, args.out, _estimates_frame([estimate], args.k), args.timing), args.output)
    return EXIT_OK


def cmd_check_bound(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    cfg = _checked_configuration(args.scene)
    params = _params(args)
    bound = check_inequality(cfg, params, progress=args.progress)
    report = RunReport(
        command=args.argv,
        parameters={"scene": str(args.scene), **params.model_dump()},
        seed=params.seed,
        estimates=bound.omegas,
        bound=bound,
        wall_time=time.perf_counter() - started,
    )
    frame = _estimates_frame(bound.omegas)
    for column in ("lhs", "lhs_stderr", "rhs", "margin", "psi_mean"):
        frame[column] = getattr(bound, column)
    frame["verdict"] = bound.verdict.value
    _emit(_report_text(report, args.out, frame, args.timing), args.output)
    return EXIT_FAILED if bound.verdict is Verdict.VIOLATION_CANDIDATE else EXIT_OK


def cmd_identities(args: argparse.Namespace) -> int:
    frame = identity_suite(args.theta_grid, args.tol)
    failed = frame[~frame["passed"]]
    for row in failed.itertuples():
        logger.warning("%s %s: residual %.3g > tol %.3g", row.check, row.case, row.residual, row.tol)
    text = frame.to_csv(index=False) if args.out == "csv" else frame.to_json(orient="records", indent=2) + "\n"
    _emit(text, args.output)
    return EXIT_FAILED if len(failed) else EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    params = _params(args)
    result = minimize(
        args.n,
        args.rho,
        Objective(args.objective),
        budget=args.budget,
        seed=args.seed,
        params=params,
        progress=args.progress,
    )
    if args.out == "csv":
        text = pd.DataFrame(result.history, columns=["iteration", "objective"]).to_csv(index=False)
    else:
        text = result.model_dump_json(indent=2) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    render_configuration(load_configuration(args.scene), args.out)
    return EXIT_OK


def _add_walk_options(parser: argparse.ArgumentParser, samples: int) -> None:
    parser.add_argument("--samples", type=int, default=samples, help="Walks per estimate")
    parser.add_argument("--epsilon", type=float, default=1e-4, help="Absorption shell width")
    parser.add_argument("--max-steps", type=int, default=1_000_000, help="Step cap per walk")
    parser.add_argument("--seed", type=int, default=0, help="64-bit seed")


def _add_output_options(parser: argparse.ArgumentParser, default: str = "csv") -> None:
    parser.add_argument("--out", choices=["csv", "json"], default=default, help="Output format")
    parser.add_argument("--output", type=Path, default=None, help="Write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmonicbound", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    parser.add_argument("--timing", action="store_true", help="Include wall time in JSON reports")
    sub = parser.add_subparsers(dest="cmd", required=True)

    estimate = sub.add_parser("estimate", help="Estimate ω_k for one marked point")
    estimate.add_argument("scene", type=Path)
    estimate.add_argument("k", type=int)
    _add_walk_options(estimate, 1_000_000)
    _add_output_options(estimate)
    estimate.set_defaults(func=cmd_estimate)

    check = sub.add_parser("check-bound", help="Test the mean-Ψ inequality for a scene")
    check.add_argument("scene", type=Path)
    _add_walk_options(check, 1_000_000)
    _add_output_options(check)
    check.set_defaults(func=cmd_check_bound)

    identities = sub.add_parser("identities", help="Run the closed-form identity suite")
    identities.add_argument("--theta-grid", default=DEFAULT_THETA_GRID, help="start:stop:step, inclusive")
    identities.add_argument("--tol", type=float, default=None, help="Override every tolerance")
    _add_output_options(identities)
    identities.set_defaults(func=cmd_identities)

    search = sub.add_parser("search", help="Nelder–Mead search over perturbed stars")
    search.add_argument("n", type=int)
    search.add_argument("rho", type=float)
    search.add_argument("--objective", choices=[o.value for o in Objective], default=Objective.MAX_OMEGA.value)
    search.add_argument("--budget", type=int, default=400, help="Objective evaluations")
    _add_walk_options(search, 20_000)
    _add_output_options(search)
    search.set_defaults(func=cmd_search)

    render = sub.add_parser("render", help="Draw a scene as SVG")
    render.add_argument("scene", type=Path)
    render.add_argument("--out", type=Path, required=True, help="SVG file to write")
    render.set_defaults(func=cmd_render)
    return parser


def _diagnostic(exc: Exception) -> str:
    field = getattr(exc, "field", None)
    message = str(exc)
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        message = first["msg"]
    return json.dumps({"error": type(exc).__name__, "field": field, "message": message})


def cli(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv (Optional[List[str]], optional): Arguments without the program name. Defaults to sys.argv[1:].

    Returns:
        int: Exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except (HarmonicBoundError, ValidationError) as exc:
        sys.stderr.write(_diagnostic(exc) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(cli())
