# standard libraries
import logging
import math
from typing import List

# third party libraries
import numpy as np
from pydantic import BaseModel, Field
from scipy import ndimage

# harmonicbound libraries
from harmonicbound.errors import DomainError, OutsideDisk, PointOnContinuum
from harmonicbound.geometry.base import Configuration, Continuum, Point, PointLike, Segment, as_complex
from harmonicbound.geometry.distance import distances

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 0.005


class VerificationResult(BaseModel):
    """Outcome of the discrete component check of a configuration"""

    ok: bool = Field(..., description="True iff the n points lie in n distinct components of U minus E")
    resolution: float = Field(..., description="Grid cell size used")
    components: int = Field(..., description="Number of free grid components found")
    labels: List[int] = Field(..., description="Component label of each marked point (0 = blocked cell)")
    distances: List[float] = Field(..., description="dist(a_k, E) for each marked point")
    message: str = Field("", description="Human-readable diagnostics")

    def __bool__(self) -> bool:
        return self.ok


def distance_to_continuum(z: PointLike, continuum: Continuum) -> float:
    """
    Exact Euclidean distance from ``z`` to the continuum.

    Args:
        z (PointLike): Query point
        continuum (Continuum): The set E

    Returns:
        float: min over pieces of the analytic point-to-piece distance
    """
    return float(distances(np.array([as_complex(z)]), continuum.packed())[0])


def star_continuum(n: int, theta: float = 0.0) -> Continuum:
    """
    The star {z : (e^{iθ}z)^n ∈ [-1, 0]}: n unit spokes at angles (π + 2πj)/n − θ.

    Args:
        n (int): Number of spokes, at least 2
        theta (float, optional): Rotation parameter. Defaults to 0.0.

    Returns:
        Continuum: Union of the n radial segments
    """
    if n < 2:
        raise DomainError(f"a star needs at least two spokes, got n={n}")
    angles = (np.pi + 2.0 * np.pi * np.arange(n)) / n - theta
    return Continuum(segments=[Segment.between(0j, complex(np.exp(1j * a))) for a in angles])


def extremal_points(n: int, rho: float, theta: float = 0.0) -> List[Point]:
    """Marked points a_k = rho·exp(2πi(k−1)/n)·e^{−iθ}, the bisector midpoints of the star's sectors."""
    return [Point.from_complex(rho * np.exp(1j * (2.0 * np.pi * k / n - theta))) for k in range(n)]


def extremal_configuration(n: int, rho: float, theta: float = 0.0) -> Configuration:
    """The equality configuration: star continuum with marked points on the sector bisectors."""
    return Configuration(n=n, rho=rho, points=extremal_points(n, rho, theta), continuum=star_continuum(n, theta))


def verify_configuration(cfg: Configuration, resolution: float = DEFAULT_RESOLUTION) -> VerificationResult:
    """
    Check that the marked points lie in distinct components of U minus E.

    The disk is discretized on a square grid of cell size ``resolution``; cells whose center is within
    half a cell diagonal of E are blocked, the free cells are labelled by 4-connected flood fill, and the
    labels of the cells holding the marked points are compared.

    Args:
        cfg (Configuration): Configuration to check
        resolution (float, optional): Grid cell size in (0, 0.05]. Defaults to 0.005.

    Raises:
        DomainError: If the resolution is out of range
        OutsideDisk: If a marked point has modulus >= 1
        PointOnContinuum: If a marked point is within 2·resolution of E

    Returns:
        VerificationResult: Verdict with diagnostics
    """
    if not 0.0 < resolution <= 0.05:
        raise DomainError(f"resolution must lie in (0, 0.05], got {resolution}")

    packed = cfg.continuum.packed()
    marked = cfg.marked
    for index, a in enumerate(marked, start=1):
        if abs(a) >= 1.0:
            raise OutsideDisk(f"point a_{index} = {a} is not inside the unit disk")
    point_gaps = distances(marked, packed)
    for index, gap in enumerate(point_gaps, start=1):
        if gap <= 2.0 * resolution:
            raise PointOnContinuum(f"point a_{index} is within {gap:.3g} of E (limit {2.0 * resolution:.3g})")

    cells = int(math.ceil(2.0 / resolution))
    axis = -1.0 + (np.arange(cells) + 0.5) * resolution
    grid = axis[np.newaxis, :] + 1j * axis[:, np.newaxis]
    inside = np.abs(grid) < 1.0
    blocked = np.zeros_like(inside)
    blocked[inside] = distances(grid[inside], packed) <= resolution * math.sqrt(2.0) / 2.0
    free = inside & ~blocked

    labels, count = ndimage.label(free)
    cols = np.clip(np.floor((marked.real + 1.0) / resolution).astype(int), 0, cells - 1)
    rows = np.clip(np.floor((marked.imag + 1.0) / resolution).astype(int), 0, cells - 1)
    point_labels = [int(v) for v in labels[rows, cols]]

    message = ""
    if 0 in point_labels:
        message = f"point(s) {[k + 1 for k, v in enumerate(point_labels) if v == 0]} fall in blocked cells"
    elif len(set(point_labels)) < cfg.n:
        message = "two or more points share a component"
    ok = not message
    logger.debug("verify_configuration: %d free components, point labels %s", count, point_labels)

    return VerificationResult(
        ok=ok,
        resolution=resolution,
        components=int(count),
        labels=point_labels,
        distances=[float(g) for g in point_gaps],
        message=message,
    )


def hyperbolic_distance(z: PointLike, w: PointLike) -> float:
    """
    Hyperbolic distance log((1+t)/(1−t)), t = |z − w| / |1 − conj(z)·w|, in the unit disk.

    Raises:
        OutsideDisk: If either point has modulus >= 1
    """
    zc, wc = as_complex(z), as_complex(w)
    for value in (zc, wc):
        if abs(value) >= 1.0:
            raise OutsideDisk(f"{value} is not inside the unit disk")
    t = abs(zc - wc) / abs(1.0 - zc.conjugate() * wc)
    return float(np.log1p(t) - np.log1p(-t))


def hyperbolic_circle_points(n: int, rho: float, center: PointLike = 0.0, phase: float = 0.0) -> List[Point]:
    """
    n equally spaced points on the hyperbolic circle of hyperbolic radius log((1+rho)/(1−rho)) about ``center``.

    They are the images of rho·exp(i(phase + 2πk/n)) under the disk automorphism sending 0 to ``center``;
    the mean-Ψ inequality holds for marked points on any such circle.
    """
    c = as_complex(center)
    if abs(c) >= 1.0:
        raise OutsideDisk(f"{c} is not inside the unit disk")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    base = rho * np.exp(1j * (phase + 2.0 * np.pi * np.arange(n) / n))
    images = (base + c) / (1.0 + np.conj(c) * base)
    return [Point.from_complex(v) for v in images]
