# standard libraries
import logging
import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

# third party libraries
import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

# harmonicbound libraries
from harmonicbound.errors import DomainError, QuadratureFailure
from harmonicbound.geometry.base import Configuration
from harmonicbound.models.conformal import Sector, inner_radius_sector, sector_product_check, slit_inner_radius_values
from harmonicbound.models.harmonic_measure import Estimate, WosParams, extremal_measure, wos_estimate

logger = logging.getLogger(__name__)

SATURATION = 1.0 - 1e-9  # an ω_k at or above this counts as 1 and sends the left side to +∞
NOISE_BAND = 3.0
QUADRATURE_TOLERANCE = 1e-10
QUADRATURE_MAX_EVALUATIONS = 1_000_000
ROUND_TRIP_TOLERANCE = 1e-12
CLOSURE_TOLERANCE = 1e-12
SECTOR_TOLERANCE = 1e-12
DEFAULT_THETA_GRID = "0.05:3.09:0.05"


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    HOLDS_WITHIN_NOISE = "HOLDS_WITHIN_NOISE"
    VIOLATION_CANDIDATE = "VIOLATION_CANDIDATE"


class BoundReport(BaseModel):
    """Both sides of the mean-Ψ inequality for one configuration"""

    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="constants")

    omegas: List[Estimate] = Field(..., description="Estimate of ω_k for k = 1..n")
    lhs: float = Field(..., description="(1/n)·Σ Ψ(ω_k); +inf when some ω_k = 1")
    lhs_stderr: float = Field(..., ge=0.0, description="Delta-method standard error of lhs")
    rhs: float = Field(..., description="−n·log ρ")
    margin: float = Field(..., description="lhs − rhs")
    verdict: Verdict = Field(..., description="Three-way verdict with a 3σ noise band")
    psi_mean: float = Field(..., description="Ψ⁻¹ of lhs, compared with the extremal measure")


def psi(x: float) -> float:
    """
    Ψ(x) = log((1 + sin(πx/2)) / (1 − sin(πx/2))), strictly increasing on [0, 1).

    Args:
        x (float): Argument in [0, 1]; x = 1 returns +inf

    Raises:
        DomainError: If x is outside [0, 1]

    Returns:
        float: Ψ(x) >= 0
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"psi is defined on [0, 1), got {x}")
    if x == 1.0:
        return math.inf
    if x <= 0.5:
        s = math.sin(math.pi * x / 2.0)
        return math.log1p(s) - math.log1p(-s)
    # 1 ± sin(u) = 2·cos²/sin²(π/4 ∓ u/2) keeps precision as x → 1
    return -2.0 * math.log(math.tan(math.pi * (1.0 - x) / 4.0))


def psi_inverse(y: float) -> float:
    """
    Ψ⁻¹(y) = (2/π)·arcsin(tanh(y/2)).

    Raises:
        DomainError: If y is negative or not finite
    """
    if not (y >= 0.0 and math.isfinite(y)):
        if y == math.inf:
            return 1.0
        raise DomainError(f"psi_inverse is defined on [0, inf), got {y}")
    if y <= 2.0:
        return 2.0 / math.pi * math.asin(math.tanh(y / 2.0))
    return 1.0 - 4.0 / math.pi * math.atan(math.exp(-y / 2.0))


def psi_derivative(x: float) -> float:
    """Ψ′(x) = π / cos(πx/2)."""
    if not 0.0 <= x < 1.0:
        raise DomainError(f"psi' is defined on [0, 1), got {x}")
    return math.pi / math.sin(math.pi * (1.0 - x) / 2.0)


def psi_mean(omegas: Sequence[float]) -> float:
    """Ψ⁻¹[(1/n)·Σ Ψ(ω_k)], the Ψ-mean of the harmonic measures."""
    return psi_inverse(float(np.mean([psi(w) for w in omegas])))


def _verdict(margin: float, stderr: float) -> Verdict:
    if margin > NOISE_BAND * stderr:
        return Verdict.HOLDS
    if margin < -NOISE_BAND * stderr:
        return Verdict.VIOLATION_CANDIDATE
    return Verdict.HOLDS_WITHIN_NOISE


def bound_report(omegas: Sequence[Estimate], rho: float) -> BoundReport:
    """
    Assemble a BoundReport from per-point estimates.

    Args:
        omegas (Sequence[Estimate]): Estimates of ω_1..ω_n
        rho (float): Radius of the marked circle

    Returns:
        BoundReport: Both sides, propagated uncertainty and verdict
    """
    n = len(omegas)
    rhs = -n * math.log(rho)
    means = [e.mean for e in omegas]

    if max(means) >= SATURATION:
        logger.info("Some ω_k saturates at 1; the left side is +inf")
        return BoundReport(
            omegas=list(omegas),
            lhs=math.inf,
            lhs_stderr=0.0,
            rhs=rhs,
            margin=math.inf,
            verdict=Verdict.HOLDS,
            psi_mean=1.0,
        )

    lhs = float(np.mean([psi(m) for m in means]))
    lhs_stderr = math.sqrt(sum((psi_derivative(e.mean) * e.stderr) ** 2 for e in omegas)) / n
    margin = lhs - rhs
    return BoundReport(
        omegas=list(omegas),
        lhs=lhs,
        lhs_stderr=lhs_stderr,
        rhs=rhs,
        margin=margin,
        verdict=_verdict(margin, lhs_stderr),
        psi_mean=psi_inverse(lhs),
    )


def check_inequality(cfg: Configuration, params: WosParams, progress: bool = False) -> BoundReport:
    """
    Estimate every ω_k by walk-on-spheres and test (1/n)·Σ Ψ(ω_k) >= −n·log ρ.

    Args:
        cfg (Configuration): A valid configuration
        params (WosParams): Walk controls
        progress (bool, optional): Show progress bars. Defaults to False.

    Returns:
        BoundReport: The report
    """
    omegas = [wos_estimate(cfg, k, params, progress=progress) for k in range(1, cfg.n + 1)]
    report = bound_report(omegas, cfg.rho)
    logger.info(
        "lhs=%.6f ± %.2g, rhs=%.6f, verdict %s", report.lhs, report.lhs_stderr, report.rhs, report.verdict.value
    )
    return report


def minmax_lower_bound(n: int, rho: float) -> float:
    """Lower bound for max_k ω_k over all admissible continua: the extremal measure ω*."""
    return extremal_measure(n, rho)


def integral_identity_check(theta: float) -> Tuple[float, float]:
    """
    ∫_{−1}^{0} dw / r(G, w) by adaptive quadrature, against the closed form (1/4)·Ψ(θ/π).

    Args:
        theta (float): Half-angle of the slit in (0.01, π − 0.01)

    Raises:
        DomainError: If theta is out of range
        QuadratureFailure: If the quadrature cannot certify 1e-10 within 10⁶ evaluations

    Returns:
        Tuple[float, float]: (quadrature, closed_form)
    """
    if not 0.01 < theta < math.pi - 0.01:
        raise DomainError(f"theta must lie in (0.01, pi - 0.01), got {theta}")

    value, error, info = quad(
        lambda w: 1.0 / slit_inner_radius_values(w, theta),
        -1.0,
        0.0,
        epsabs=1e-12,
        epsrel=0.0,
        limit=QUADRATURE_MAX_EVALUATIONS // 21,
        full_output=1,
    )[:3]
    if error > QUADRATURE_TOLERANCE or info["neval"] > QUADRATURE_MAX_EVALUATIONS:
        raise QuadratureFailure(f"quadrature error estimate {error:.3g} after {info['neval']} evaluations")
    return float(value), 0.25 * psi(theta / math.pi)


def radial_chain_check(n: int, rho: float) -> Tuple[float, float]:
    """
    ∫_ρ^1 dr / r(sector, r) at the sector configuration, against −(n/4)·log ρ.

    The radial integral equals (1/4)·Ψ(ω*) for each of the n equal domains, which closes the chain of
    inequalities at the extremal configuration.

    Returns:
        Tuple[float, float]: (radial_integral, bound)
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    sector = Sector(n=n)
    value, _ = quad(lambda r: 1.0 / inner_radius_sector(sector, r), rho, 1.0, epsabs=1e-14, epsrel=1e-14, limit=200)
    return float(value), -n / 4.0 * math.log(rho)


def _closure_tolerance(omega: float) -> float:
    """1e-12 plus the change in Ψ caused by one rounding step of ω, which dominates as ω* → 1."""
    return CLOSURE_TOLERANCE + psi_derivative(omega) * math.ulp(omega)


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``start:stop:step`` into an inclusive grid."""
    try:
        start, stop, step = (float(part) for part in spec.split(":"))
    except ValueError as exc:
        raise DomainError(f"grid must look like start:stop:step, got {spec!r}") from exc
    if step <= 0 or stop < start:
        raise DomainError(f"grid {spec!r} is empty")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def identity_suite(theta_grid: str = DEFAULT_THETA_GRID, tol: Optional[float] = None) -> pd.DataFrame:
    """
    Run every closed-form check and tabulate residuals.

    Checks: the slit integral identity over ``theta_grid``; the Ψ round trip on 10³ points of [0, 0.999];
    the closure Ψ(ω*) = −n·log ρ and the radial chain for n ∈ {2..8}, ρ ∈ {0.05..0.95}; the sector
    geometric mean for n ∈ {2..6}, r ∈ {0.1..0.9}.

    Args:
        theta_grid (str, optional): Grid for the integral identity. Defaults to "0.05:3.09:0.05".
        tol (Optional[float], optional): Overrides every per-check tolerance. Defaults to None.

    Returns:
        pd.DataFrame: One row per case with columns check, case, value, reference, residual, tol, passed
    """
    rows = []

    def record(check: str, case: str, value: float, reference: float, residual: float, default_tol: float) -> None:
        limit = default_tol if tol is None else tol
        rows.append(
            {
                "check": check,
                "case": case,
                "value": value,
                "reference": reference,
                "residual": residual,
                "tol": limit,
                "passed": bool(residual <= limit),
            }
        )

    for theta in parse_grid(theta_grid):
        quadrature, closed_form = integral_identity_check(float(theta))
        record(
            "integral_identity",
            f"theta={theta:.4f}",
            quadrature,
            closed_form,
            abs(quadrature - closed_form),
            QUADRATURE_TOLERANCE,
        )

    for x in np.linspace(0.0, 0.999, 1000):
        back = psi_inverse(psi(float(x)))
        record("psi_round_trip", f"x={x:.6f}", back, float(x), abs(back - x), ROUND_TRIP_TOLERANCE)

    rhos = 0.05 * np.arange(1, 20)
    for n in range(2, 9):
        for rho in rhos:
            case = f"n={n},rho={rho:.2f}"
            target = -n * math.log(rho)
            omega = extremal_measure(n, float(rho))
            value = psi(omega)
            limit = _closure_tolerance(omega)
            record("extremal_closure", case, value, target, abs(value - target), limit)

            radial, bound = radial_chain_check(n, float(rho))
            record("radial_chain", case, radial, bound, abs(radial - bound), CLOSURE_TOLERANCE)
            record("chain_closure", case, 0.25 * value, bound, abs(0.25 * value - bound), limit)

    for n in range(2, 7):
        for r in 0.1 * np.arange(1, 10):
            mean, bound = sector_product_check(n, float(r))
            record("sector_product", f"n={n},r={r:.1f}", mean, bound, abs(mean - bound), SECTOR_TOLERANCE)

    frame = pd.DataFrame(rows)
    failed = int((~frame["passed"]).sum())
    logger.info("identity suite: %d cases, %d failed", len(frame), failed)
    return frame
