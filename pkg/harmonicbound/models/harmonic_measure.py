# standard libraries
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple, Optional, Tuple

# third party libraries
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import quad
from tqdm import tqdm

# harmonicbound libraries
from harmonicbound.errors import DomainError, InvalidStart, OutsideDisk, WalksExhausted
from harmonicbound.geometry.base import Configuration, Continuum, PointLike, as_complex
from harmonicbound.geometry.distance import ContinuumArrays, distances
from harmonicbound.models.conformal import MobiusDiskAuto
from harmonicbound.utils import TWO_PI, worker_count

logger = logging.getLogger(__name__)

CHUNK_SIZE = 4096  # walks per random stream; fixed so results do not depend on the worker count
TIE_TOLERANCE = 1e-15
ABORT_RATE_WARNING = 1e-4
SELFCHECK_STREAM = 0


class WosParams(BaseModel):
    """Walk-on-spheres controls"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    epsilon: float = Field(1e-4, gt=0.0, le=0.01, description="Absorption shell width, at most 0.01")
    max_steps: int = Field(1_000_000, ge=1, description="Step cap per walk")
    samples: int = Field(1_000_000, ge=1, description="Number of independent walks")
    seed: int = Field(0, ge=0, lt=2**64, description="64-bit seed of the counter-based generator")


class Estimate(BaseModel):
    """Monte Carlo harmonic-measure value"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mean: float = Field(..., ge=0.0, le=1.0, description="hit_E / (hit_E + hit_circle)")
    stderr: float = Field(..., ge=0.0, description="Binomial standard error of the mean")
    samples: int = Field(..., ge=1, description="Walks launched")
    hit_E: int = Field(..., ge=0, description="Walks absorbed at the continuum")
    hit_circle: int = Field(..., ge=0, description="Walks absorbed at the unit circle (or outside the target arc)")
    aborted: int = Field(0, ge=0, description="Walks that exceeded max_steps")

    @model_validator(mode="after")
    def _counts(self) -> "Estimate":
        if self.hit_E + self.hit_circle + self.aborted != self.samples:
            raise ValueError("hit_E + hit_circle + aborted must equal samples")
        return self

    @classmethod
    def from_counts(cls, hit_e: int, hit_circle: int, aborted: int) -> "Estimate":
        """
        Estimate from absorption counts; aborted walks are left out of the mean.

        Raises:
            WalksExhausted: If no walk was scored
        """
        scored = hit_e + hit_circle
        if scored == 0:
            raise WalksExhausted(f"all {aborted} walks exceeded the step cap; raise max_steps")
        mean = hit_e / scored
        stderr = math.sqrt(mean * (1.0 - mean) / scored)
        return cls(
            mean=mean, stderr=stderr, samples=scored + aborted, hit_E=hit_e, hit_circle=hit_circle, aborted=aborted
        )


class _ChunkTask(NamedTuple):
    start: complex
    packed: Optional[ContinuumArrays]
    arc_theta: Optional[float]
    epsilon: float
    max_steps: int
    seed: int
    stream: int
    chunk: int
    count: int


def _chunk_generator(seed: int, stream: int, chunk: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by (seed, stream, chunk)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, chunk))))


def _walk_chunk(task: _ChunkTask) -> Tuple[int, int, int]:
    """
    Run one chunk of walks in lock-step.

    With a continuum, a walk stops inside the ε-shell of E ∪ T and scores for E when dist(z, E) <= 1 − |z|.
    Without one (disk self-check), a walk stops inside the ε-shell of T and scores when its exit angle
    lies in [−θ, θ].
    """
    rng = _chunk_generator(task.seed, task.stream, task.chunk)
    position = np.full(task.count, task.start, dtype=complex)
    hit_e = hit_circle = 0

    for _ in range(task.max_steps):
        to_circle = 1.0 - np.abs(position)
        if task.packed is None:
            radius = to_circle
        else:
            to_e = distances(position, task.packed)
            radius = np.minimum(to_e, to_circle)

        stopped = radius < task.epsilon
        if stopped.any():
            if task.packed is None:
                scored = np.abs(np.angle(position[stopped])) <= task.arc_theta
            else:
                scored = to_e[stopped] <= to_circle[stopped] + TIE_TOLERANCE
            hit_e += int(np.count_nonzero(scored))
            hit_circle += int(scored.size - np.count_nonzero(scored))
            position = position[~stopped]
            radius = radius[~stopped]
        if position.size == 0:
            break

        angles = rng.uniform(0.0, TWO_PI, position.size)
        position = position + radius * np.exp(1j * angles)

    return hit_e, hit_circle, int(position.size)


def _run_walks(
    start: complex,
    packed: Optional[ContinuumArrays],
    arc_theta: Optional[float],
    params: WosParams,
    stream: int,
    progress: bool = False,
) -> Estimate:
    tasks = [
        _ChunkTask(
            start=start,
            packed=packed,
            arc_theta=arc_theta,
            epsilon=params.epsilon,
            max_steps=params.max_steps,
            seed=params.seed,
            stream=stream,
            chunk=chunk,
            count=min(CHUNK_SIZE, params.samples - offset),
        )
        for chunk, offset in enumerate(range(0, params.samples, CHUNK_SIZE))
    ]

    workers = min(worker_count(), len(tasks))
    description = f"Walking from {start:.4f}"
    if workers <= 1:
        results = [_walk_chunk(task) for task in tqdm(tasks, desc=description, disable=not progress)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(
                tqdm(executor.map(_walk_chunk, tasks), total=len(tasks), desc=description, disable=not progress)
            )

    # executor.map preserves task order, so the reduction runs in chunk order
    hit_e = sum(r[0] for r in results)
    hit_circle = sum(r[1] for r in results)
    aborted = sum(r[2] for r in results)
    if aborted / params.samples > ABORT_RATE_WARNING:
        logger.warning(
            "%d of %d walks from %s exceeded max_steps=%d", aborted, params.samples, start, params.max_steps
        )
    return Estimate.from_counts(hit_e, hit_circle, aborted)


def estimate_from_point(
    continuum: Continuum, z: PointLike, params: WosParams, stream: int = 1, progress: bool = False
) -> Estimate:
    """
    Harmonic measure of E seen from z in the component of U minus E containing z.

    Args:
        continuum (Continuum): The set E
        z (PointLike): Start point
        params (WosParams): Walk controls
        stream (int, optional): Stream index mixed into the seed. Defaults to 1.
        progress (bool, optional): Show a progress bar. Defaults to False.

    Raises:
        InvalidStart: If z is within epsilon of E or of the unit circle

    Returns:
        Estimate: Monte Carlo estimate
    """
    start = as_complex(z)
    packed = continuum.packed()
    to_e = float(distances(np.array([start]), packed)[0])
    to_circle = 1.0 - abs(start)
    if to_e <= params.epsilon or to_circle <= params.epsilon:
        raise InvalidStart(
            f"start {start} is too close to the boundary (dist to E {to_e:.3g}, to circle {to_circle:.3g}, "
            f"epsilon {params.epsilon:.3g})"
        )
    return _run_walks(start, packed, None, params, stream, progress)


def wos_estimate(cfg: Configuration, k: int, params: WosParams, progress: bool = False) -> Estimate:
    """
    Walk-on-spheres estimate of ω_k = ω(a_k, E, D_k).

    Each k uses its own random stream so the n estimates of one configuration are independent.

    Args:
        cfg (Configuration): A valid configuration
        k (int): 1-based index of the marked point
        params (WosParams): Walk controls
        progress (bool, optional): Show a progress bar. Defaults to False.

    Returns:
        Estimate: Monte Carlo estimate of ω_k
    """
    if not 1 <= k <= cfg.n:
        raise DomainError(f"k must lie in [1, {cfg.n}], got {k}")
    return estimate_from_point(cfg.continuum, cfg.points[k - 1], params, stream=k, progress=progress)


def wos_selfcheck_disk(z: PointLike, theta: float, params: WosParams, progress: bool = False) -> Estimate:
    """
    Solver calibration: harmonic measure of the boundary arc {|arg w| <= θ} in the plain disk.

    Raises:
        InvalidStart: If z is within epsilon of the unit circle
    """
    start = as_complex(z)
    if abs(start) >= 1.0:
        raise OutsideDisk(f"{start} is not inside the unit disk")
    if 1.0 - abs(start) <= params.epsilon:
        raise InvalidStart(f"start {start} is within epsilon of the unit circle")
    return _run_walks(start, None, theta, params, SELFCHECK_STREAM, progress)


def exact_arc_measure(z: PointLike, theta: float) -> float:
    """
    Exact harmonic measure at z of the arc {|w| = 1, |arg w| <= θ} with respect to the disk.

    The automorphism sending z to 0 carries the arc to an arc of angular length L, and the measure is L/(2π).

    Args:
        z (PointLike): Point with |z| < 1
        theta (float): Half-angle of the arc in (0, π)

    Raises:
        OutsideDisk: If |z| >= 1

    Returns:
        float: The harmonic measure in [0, 1]
    """
    zc = as_complex(z)
    if abs(zc) >= 1.0:
        raise OutsideDisk(f"{zc} is not inside the unit disk")
    if not 0.0 < theta < math.pi:
        raise DomainError(f"theta must lie in (0, pi), got {theta}")
    if zc == 0:
        return theta / math.pi

    m = MobiusDiskAuto.to_origin(zc)
    head, tail = m(np.exp(1j * theta)), m(np.exp(-1j * theta))
    length = float(np.mod(np.angle(head / tail), TWO_PI))
    return length / TWO_PI


def poisson_arc_measure(z: PointLike, theta: float) -> float:
    """Harmonic measure of the arc {|arg w| <= θ} by quadrature of the Poisson kernel."""
    zc = as_complex(z)
    if abs(zc) >= 1.0:
        raise OutsideDisk(f"{zc} is not inside the unit disk")
    weight = 1.0 - abs(zc) ** 2

    def kernel(t: float) -> float:
        return weight / abs(np.exp(1j * t) - zc) ** 2

    value, _ = quad(kernel, -theta, theta, epsabs=1e-13, epsrel=1e-13, limit=200)
    return value / TWO_PI


def extremal_measure(n: int, rho: float) -> float:
    """
    ω* = (2/π)·arcsin((1 − ρⁿ)/(1 + ρⁿ)), the common harmonic measure at the star configuration.

    Evaluated as 1 − (4/π)·arctan(ρ^{n/2}), which keeps full relative accuracy in 1 − ω* as ρⁿ → 0.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    tail = rho ** (n / 2.0)
    if tail < 0.5:
        return 1.0 - 4.0 / math.pi * math.atan(tail)
    q = rho**n
    return 2.0 / math.pi * math.asin((1.0 - q) / (1.0 + q))
