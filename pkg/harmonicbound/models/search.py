# standard libraries
import logging
import math
from enum import Enum
from itertools import combinations
from typing import List, Optional, Tuple

# third party libraries
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import optimize
from tqdm import tqdm

# harmonicbound libraries
from harmonicbound.errors import DomainError, InvalidPerturbation
from harmonicbound.geometry.base import Configuration, Continuum, Segment
from harmonicbound.geometry.configuration import extremal_points, verify_configuration
from harmonicbound.geometry.distance import SegmentPiece, segments_intersect
from harmonicbound.models.extremal_bound import bound_report
from harmonicbound.models.harmonic_measure import WosParams, wos_estimate

logger = logging.getLogger(__name__)

LATERAL_LIMIT = 0.2
PENALTY = 1e6
SIMPLEX_STEP = 0.05
SIMPLEX_XATOL = 1e-3
START_SPREAD = 0.1
BOUND_SHRINK = 1.0 - 1e-9  # keeps clipped simplex vertices inside the open parameter box
MIN_BUDGET = 50
SEARCH_SAMPLES = 20_000
SEARCH_RESOLUTION = 0.01


class Objective(str, Enum):
    MEAN_PSI = "MEAN_PSI"
    MAX_OMEGA = "MAX_OMEGA"


class StarPerturbation(BaseModel):
    """
    A star of n polyline spokes through the origin.

    Spoke j leaves the origin in direction u_j = exp(i((π + 2πj)/n − θ + offset_j)), bends at the joints
    r_i·u_j + l_{j,i}·i·u_j and ends at u_j on the unit circle.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2, description="Number of spokes")
    spoke_angle_offsets: List[float] = Field(..., description="Angular offset of each spoke, in (−π/2n, π/2n)")
    joint_radii: List[float] = Field([1.0 / 3.0, 2.0 / 3.0], description="Ascending joint radii in (0, 1)")
    joint_lateral_offsets: List[List[float]] = Field(
        ..., description="n×m perpendicular joint displacements, each in (−0.2, 0.2)"
    )
    theta: float = Field(0.0, description="Global rotation of the star (radians)")

    @model_validator(mode="after")
    def _check(self) -> "StarPerturbation":
        limit = math.pi / (2.0 * self.n)
        if len(self.spoke_angle_offsets) != self.n:
            raise ValueError(f"expected {self.n} spoke offsets, got {len(self.spoke_angle_offsets)}")
        if any(not -limit < v < limit for v in self.spoke_angle_offsets):
            raise ValueError(f"spoke offsets must lie in (-{limit:.6g}, {limit:.6g})")
        radii = self.joint_radii
        if not radii or any(not 0.0 < r < 1.0 for r in radii) or any(a >= b for a, b in zip(radii, radii[1:])):
            raise ValueError("joint radii must be strictly ascending in (0, 1)")
        rows = self.joint_lateral_offsets
        if len(rows) != self.n or any(len(row) != len(radii) for row in rows):
            raise ValueError(f"lateral offsets must have shape ({self.n}, {len(radii)})")
        if any(not -LATERAL_LIMIT < v < LATERAL_LIMIT for row in rows for v in row):
            raise ValueError(f"lateral offsets must lie in (-{LATERAL_LIMIT}, {LATERAL_LIMIT})")
        return self

    @classmethod
    def zero(cls, n: int, theta: float = 0.0, joint_radii: Optional[List[float]] = None) -> "StarPerturbation":
        radii = [1.0 / 3.0, 2.0 / 3.0] if joint_radii is None else list(joint_radii)
        return cls(
            n=n,
            spoke_angle_offsets=[0.0] * n,
            joint_radii=radii,
            joint_lateral_offsets=[[0.0] * len(radii) for _ in range(n)],
            theta=theta,
        )

    @classmethod
    def from_vector(
        cls, n: int, vector: np.ndarray, joint_radii: Optional[List[float]] = None, theta: float = 0.0
    ) -> "StarPerturbation":
        """Inverse of ``to_vector``: n spoke offsets followed by the lateral offsets in row-major order."""
        radii = [1.0 / 3.0, 2.0 / 3.0] if joint_radii is None else list(joint_radii)
        vector = np.asarray(vector, dtype=float)
        if vector.size != n * (1 + len(radii)):
            raise InvalidPerturbation(f"expected a vector of length {n * (1 + len(radii))}, got {vector.size}")
        return cls(
            n=n,
            spoke_angle_offsets=vector[:n].tolist(),
            joint_radii=radii,
            joint_lateral_offsets=vector[n:].reshape(n, len(radii)).tolist(),
            theta=theta,
        )

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.spoke_angle_offsets, np.ravel(self.joint_lateral_offsets)])

    @property
    def magnitude(self) -> float:
        """Largest absolute entry of the perturbation vector."""
        return float(np.max(np.abs(self.to_vector())))


class SearchResult(BaseModel):
    """Outcome of a Nelder–Mead run over star perturbations"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    objective: Objective = Field(..., description="Minimized objective")
    best_params: StarPerturbation = Field(..., description="Best perturbation found")
    best_objective: float = Field(..., description="Objective value at best_params")
    history: List[Tuple[int, float]] = Field(..., description="(iteration, best objective so far)")
    evaluations: int = Field(..., ge=0, description="Objective evaluations spent")
    converged: bool = Field(..., description="False if the run stopped on the evaluation budget")
    message: str = Field("", description="Optimizer diagnostics")


class _BudgetExhausted(Exception):
    pass


def spoke_vertices(p: StarPerturbation) -> List[np.ndarray]:
    """Polyline vertices of every spoke, origin first and the unit-circle endpoint last."""
    radii = np.asarray(p.joint_radii)
    angles = (np.pi + 2.0 * np.pi * np.arange(p.n)) / p.n - p.theta + np.asarray(p.spoke_angle_offsets)
    spokes = []
    for j, angle in enumerate(angles):
        u = complex(np.exp(1j * angle))
        joints = (radii + 1j * np.asarray(p.joint_lateral_offsets[j])) * u
        spokes.append(np.concatenate([[0j], joints, [u]]))
    return spokes


def _first_legs_overlap(a: SegmentPiece, b: SegmentPiece) -> bool:
    """Two legs leaving the origin meet elsewhere only if they point the same way."""
    da, db = a.p1 - a.p0, b.p1 - b.p0
    cross = (da.conjugate() * db).imag
    return abs(cross) <= 1e-12 * abs(da) * abs(db) and (da.conjugate() * db).real > 0.0


def realize(p: StarPerturbation) -> Continuum:
    """
    Build the polyline continuum of a star perturbation.

    Spokes without lateral offsets are emitted as a single radial segment, so the zero perturbation
    reproduces ``star_continuum(n, theta)`` piece for piece.

    Args:
        p (StarPerturbation): The perturbation

    Raises:
        InvalidPerturbation: If a vertex leaves the closed disk or two spokes meet away from the origin

    Returns:
        Continuum: Union of the spoke polylines
    """
    spokes = spoke_vertices(p)
    legs: List[List[SegmentPiece]] = []
    for j, vertices in enumerate(spokes):
        if np.any(np.abs(vertices) > 1.0 + 1e-12):
            raise InvalidPerturbation(f"spoke {j + 1} leaves the closed unit disk")
        if not np.any(p.joint_lateral_offsets[j]):
            vertices = vertices[[0, -1]]
        legs.append([SegmentPiece(complex(a), complex(b)) for a, b in zip(vertices[:-1], vertices[1:])])

    for (i, left), (j, right) in combinations(enumerate(legs), 2):
        for li, a in enumerate(left):
            for lj, b in enumerate(right):
                crossed = _first_legs_overlap(a, b) if li == lj == 0 else segments_intersect(a, b)
                if crossed:
                    raise InvalidPerturbation(f"spokes {i + 1} and {j + 1} intersect away from the origin")

    return Continuum(segments=[Segment.between(leg.p0, leg.p1) for spoke in legs for leg in spoke])


def perturbed_configuration(p: StarPerturbation, rho: float) -> Configuration:
    """Realized continuum with the marked points a_k = ρ·exp(2πi(k−1)/n)·e^{−iθ} riding the rotation."""
    return Configuration(n=p.n, rho=rho, points=extremal_points(p.n, rho, p.theta), continuum=realize(p))


def objective_with_stderr(
    p: StarPerturbation,
    rho: float,
    objective: Objective,
    params: WosParams,
    resolution: float = SEARCH_RESOLUTION,
) -> Tuple[float, float]:
    """
    Objective value and its Monte Carlo standard error.

    Every ω_k is estimated with the seed of ``params``, so repeated calls share random numbers and the
    objective is a deterministic function of ``p``.

    Raises:
        InvalidPerturbation: If the realized continuum does not separate the marked points
    """
    cfg = perturbed_configuration(p, rho)
    check = verify_configuration(cfg, resolution=resolution)
    if not check:
        raise InvalidPerturbation(f"perturbed star does not separate the points: {check.message}")

    omegas = [wos_estimate(cfg, k, params) for k in range(1, cfg.n + 1)]
    if objective is Objective.MAX_OMEGA:
        worst = max(omegas, key=lambda e: e.mean)
        return worst.mean, worst.stderr
    report = bound_report(omegas, rho)
    return report.lhs, report.lhs_stderr


def evaluate_objective(
    p: StarPerturbation,
    rho: float,
    objective: Objective,
    params: WosParams,
    resolution: float = SEARCH_RESOLUTION,
) -> float:
    """
    Mean-Ψ left side or largest ω_k of the realized perturbation.

    Args:
        p (StarPerturbation): The perturbation
        rho (float): Radius of the marked circle
        objective (Objective): MEAN_PSI or MAX_OMEGA
        params (WosParams): Walk controls; the seed is shared by all evaluations
        resolution (float, optional): Grid size of the separation check. Defaults to 0.01.

    Returns:
        float: The objective value
    """
    return objective_with_stderr(p, rho, objective, params, resolution)[0]


def _parameter_bounds(n: int, m: int) -> List[Tuple[float, float]]:
    angle = math.pi / (2.0 * n) * BOUND_SHRINK
    lateral = LATERAL_LIMIT * BOUND_SHRINK
    return [(-angle, angle)] * n + [(-lateral, lateral)] * (n * m)


def _initial_simplex(x0: np.ndarray, step: float, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Axis-aligned simplex around ``x0``; steps that would leave the box go the other way."""
    simplex = np.vstack([x0, x0 + step * np.eye(x0.size)])
    outside = simplex[1:] > upper
    simplex[1:][outside] -= 2.0 * step
    return np.clip(simplex, lower, upper)


def minimize(
    n: int,
    rho: float,
    objective: Objective,
    budget: int = 400,
    seed: int = 0,
    params: Optional[WosParams] = None,
    joint_radii: Optional[List[float]] = None,
    progress: bool = False,
) -> SearchResult:
    """
    Nelder–Mead search over star perturbations with θ fixed at 0.

    The start point is drawn uniformly from [−0.1, 0.1] per coordinate with ``numpy.random.default_rng(seed)``,
    infeasible perturbations score a flat penalty, and the run stops after ``budget`` objective evaluations
    with the best point found so far.

    Args:
        n (int): Number of spokes
        rho (float): Radius of the marked circle
        objective (Objective): MEAN_PSI or MAX_OMEGA
        budget (int, optional): Objective evaluations allowed, at least 50. Defaults to 400.
        seed (int, optional): Seed of the start point. Defaults to 0.
        params (Optional[WosParams], optional): Walk controls. Defaults to 20000 samples per ω_k.
        joint_radii (Optional[List[float]], optional): Joint radii. Defaults to [1/3, 2/3].
        progress (bool, optional): Show a progress bar over evaluations. Defaults to False.

    Returns:
        SearchResult: Best perturbation and the running-best history
    """
    if budget < MIN_BUDGET:
        raise DomainError(f"budget must be at least {MIN_BUDGET}, got {budget}")
    params = params or WosParams(samples=SEARCH_SAMPLES)
    radii = [1.0 / 3.0, 2.0 / 3.0] if joint_radii is None else list(joint_radii)
    bounds = _parameter_bounds(n, len(radii))
    lower, upper = np.array(bounds).T

    rng = np.random.default_rng(seed)
    x0 = np.clip(rng.uniform(-START_SPREAD, START_SPREAD, len(bounds)), lower, upper)

    state = {"evaluations": 0, "best": math.inf, "best_x": x0}
    history: List[Tuple[int, float]] = []
    bar = tqdm(total=budget, desc=f"Searching n={n} {objective.value}", disable=not progress)

    def scored(x: np.ndarray) -> float:
        if state["evaluations"] >= budget:
            raise _BudgetExhausted
        state["evaluations"] += 1
        bar.update(1)
        try:
            value = evaluate_objective(StarPerturbation.from_vector(n, x, radii), rho, objective, params)
        except ValueError as exc:
            logger.debug("infeasible perturbation: %s", exc)
            value = PENALTY
        if value < state["best"]:
            state["best"], state["best_x"] = value, np.array(x)
        return value

    def record(_: np.ndarray) -> None:
        history.append((len(history) + 1, float(state["best"])))

    # a collapsed simplex restarts around the best point with half the step until the budget is spent;
    # fatol = 0 keeps a pass running while the vertices still disagree
    step, restarts = SIMPLEX_STEP, 0
    converged, message = False, ""
    try:
        while state["evaluations"] + len(bounds) + 1 <= budget:
            start = np.array(state["best_x"])
            result = optimize.minimize(
                scored,
                start,
                method="Nelder-Mead",
                bounds=bounds,
                callback=record,
                options={
                    "initial_simplex": _initial_simplex(start, step, lower, upper),
                    "maxfev": budget - state["evaluations"],
                    "maxiter": budget,
                    "xatol": SIMPLEX_XATOL,
                    "fatol": 0.0,
                    "adaptive": False,
                },
            )
            converged, message = bool(result.success), str(result.message)
            restarts += 1
            step *= 0.5
            logger.debug("Nelder-Mead pass %d ended after %d evaluations: %s", restarts, state["evaluations"], message)
        message = f"{message} ({restarts} passes, {state['evaluations']} evaluations)"
    except _BudgetExhausted:
        converged, message = False, f"evaluation budget of {budget} exhausted after {restarts + 1} passes"
        logger.warning("Search stopped after %d evaluations with best objective %.6g", budget, state["best"])
    finally:
        bar.close()

    best = StarPerturbation.from_vector(n, state["best_x"], radii)
    logger.info("Search finished: best %s = %.6f, magnitude %.3g", objective.value, state["best"], best.magnitude)
    return SearchResult(
        objective=objective,
        best_params=best,
        best_objective=float(state["best"]),
        history=history,
        evaluations=int(state["evaluations"]),
        converged=converged,
        message=message,
    )
