# standard libraries
import logging
import math
from typing import Tuple

# third party libraries
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.stats import gmean

# harmonicbound libraries
from harmonicbound.errors import DomainError, OnSlit
from harmonicbound.geometry.base import CircularArc, Configuration, Continuum, Point, PointLike, Segment, as_complex
from harmonicbound.utils import TWO_PI

logger = logging.getLogger(__name__)

SLIT_TOLERANCE = 1e-12
COLLINEAR_TOLERANCE = 1e-12


class MobiusDiskAuto(BaseModel):
    """The disk automorphism z ↦ e^{iφ}(z − a)/(1 − conj(a)·z)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: Point = Field(Point(), description="Point sent to the origin, |a| < 1")
    phi: float = Field(0.0, description="Post-rotation angle (radians)")

    @field_validator("a")
    @classmethod
    def _inside(cls, value: Point) -> Point:
        if value.infinite or abs(value.z) >= 1.0:
            raise ValueError("the automorphism parameter must lie in the open unit disk")
        return value

    @classmethod
    def to_origin(cls, a: PointLike, phi: float = 0.0) -> "MobiusDiskAuto":
        return cls(a=Point.from_complex(as_complex(a)), phi=phi)

    def inverse(self) -> "MobiusDiskAuto":
        """The inverse automorphism, e^{−iφ}(w + a·e^{iφ})/(1 + conj(a)·e^{−iφ}·w)."""
        return MobiusDiskAuto(a=Point.from_complex(-self.a.z * np.exp(1j * self.phi)), phi=-self.phi)

    def __call__(self, z: np.ndarray | complex) -> np.ndarray | complex:
        a = self.a.z
        return np.exp(1j * self.phi) * (z - a) / (1.0 - np.conj(a) * z)


class SlitComplementDomain(BaseModel):
    """The sphere minus the boundary arc {|w| = 1, |arg w| <= theta}"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    theta: float = Field(..., gt=0.0, lt=math.pi, description="Half-angle of the removed arc")


class Sector(BaseModel):
    """The unbounded sector {z : |arg z − bisector_angle| < π/n}"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2, description="Number of congruent sectors filling the plane")
    bisector_angle: float = Field(0.0, description="Direction of the bisecting ray (radians)")


def mobius_apply(m: MobiusDiskAuto, z: PointLike) -> Point:
    """
    Apply a disk automorphism to a point of the closed disk.

    Args:
        m (MobiusDiskAuto): The automorphism
        z (PointLike): Point with |z| <= 1

    Returns:
        Point: e^{iφ}(z − a)/(1 − conj(a)·z)
    """
    return Point.from_complex(m(as_complex(z)))


def _image_piece(m: MobiusDiskAuto, start: complex, middle: complex, end: complex) -> Segment | CircularArc:
    """Segment or arc through the images of three points of a segment/arc (Möbius maps preserve circles)."""
    p, q, r = m(start), m(middle), m(end)
    cross = ((q - p).conjugate() * (r - p)).imag
    scale = max(abs(q - p), abs(r - p), 1e-300)
    if abs(cross) <= COLLINEAR_TOLERANCE * scale * scale:
        return Segment.between(p, r)

    # circumcenter of p, q, r
    pq, pr = q - p, r - p
    center = p - 1j * (abs(pq) ** 2 * pr - abs(pr) ** 2 * pq) / (2.0 * (pq.conjugate() * pr).imag)
    radius = float(np.mean([abs(p - center), abs(q - center), abs(r - center)]))
    ap, aq, ar = (float(np.angle(v - center)) for v in (p, q, r))
    to_mid = (aq - ap) % TWO_PI
    to_end = (ar - ap) % TWO_PI
    if to_mid <= to_end:
        angle0, span = ap, to_end
    else:
        angle0, span = ar, (ap - ar) % TWO_PI
    return CircularArc(center=Point.from_complex(center), radius=radius, angle0=angle0, angle1=angle0 + span)


def transport_continuum(continuum: Continuum, m: MobiusDiskAuto) -> Continuum:
    """
    Image of a continuum under a disk automorphism, mapping every piece exactly to a segment or an arc.

    Args:
        continuum (Continuum): The set E
        m (MobiusDiskAuto): The automorphism

    Returns:
        Continuum: m(E)
    """
    pieces = []
    for segment in continuum.segments:
        p0, p1 = segment.p0.z, segment.p1.z
        pieces.append(_image_piece(m, p0, 0.5 * (p0 + p1), p1))
    for arc in continuum.arcs:
        angles = np.array([arc.angle0, 0.5 * (arc.angle0 + arc.angle1), arc.angle1])
        pieces.append(_image_piece(m, *(arc.center.z + arc.radius * np.exp(1j * angles))))
    return Continuum(
        segments=[p for p in pieces if isinstance(p, Segment)],
        arcs=[p for p in pieces if isinstance(p, CircularArc)],
    )


def rotate_configuration(cfg: Configuration, angle: float) -> Configuration:
    """Rotate every piece of E and every marked point by ``angle`` about the origin."""
    turn = np.exp(1j * angle)
    segments = [Segment.between(s.p0.z * turn, s.p1.z * turn) for s in cfg.continuum.segments]
    arcs = [
        CircularArc(
            center=Point.from_complex(a.center.z * turn),
            radius=a.radius,
            angle0=a.angle0 + angle,
            angle1=a.angle1 + angle,
        )
        for a in cfg.continuum.arcs
    ]
    return Configuration(
        n=cfg.n,
        rho=cfg.rho,
        points=[Point.from_complex(p.z * turn) for p in cfg.points],
        continuum=Continuum(segments=segments, arcs=arcs),
    )


def _on_slit(w: complex, theta: float) -> bool:
    return abs(abs(w) - 1.0) <= SLIT_TOLERANCE and abs(np.angle(w)) <= theta


def _chain(w: np.ndarray, theta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized map chain; returns (w2, ζ) for inputs different from −1."""
    w1 = (w - 1.0) / (w + 1.0)
    w2 = -1j * w1 / np.tan(theta / 2.0)
    root = np.sqrt(w2 * w2 - 1.0)
    # the two candidates w2 ∓ root multiply to 1; invert the larger one for the small root
    plus, minus = w2 + root, w2 - root
    large = np.where(np.abs(plus) >= np.abs(minus), plus, minus)
    return w2, 1.0 / large


def slit_map_values(d: SlitComplementDomain, w: np.ndarray) -> np.ndarray:
    """
    Vectorized slit map chain for finite inputs off the slit.

    The pole of w₁ at w = −1 is removable for the composite map and sent to 0.
    """
    w = np.asarray(w, dtype=complex)
    out = np.zeros(w.shape, dtype=complex)
    regular = w != -1.0
    _, out[regular] = _chain(w[regular], d.theta)
    return out


def slit_map_chain(d: SlitComplementDomain, w: Point | complex) -> Point:
    """
    Conformal map of the slit complement G onto the unit disk.

    The chain is w₁ = (w − 1)/(w + 1), w₂ = −i·w₁·ctg(θ/2), ζ = w₂ − √(w₂² − 1), with the branch
    of the inverse Joukowski map that sends w₂ = ∞ to 0, i.e. |ζ| <= 1. Since w₂ = ∞ exactly when w = −1,
    the composite sends −1 to 0; the point at infinity goes to i·tan(θ/4).

    Args:
        d (SlitComplementDomain): The domain G
        w (Point | complex): Point of G; ``Point.infinity()`` is accepted

    Raises:
        OnSlit: If w lies on the removed arc

    Returns:
        Point: ζ with |ζ| < 1
    """
    if isinstance(w, Point) and w.infinite:
        return Point.from_complex(1j * math.tan(d.theta / 4.0))

    wc = as_complex(w)
    if _on_slit(wc, d.theta):
        raise OnSlit(f"{wc} lies on the arc |w| = 1, |arg w| <= {d.theta}")
    return Point.from_complex(complex(slit_map_values(d, np.array([wc]))[0]))


def slit_map_derivative(d: SlitComplementDomain, w: PointLike) -> complex:
    """
    Analytic derivative of the slit map chain, w₁′(w)·(−i·ctg(θ/2))·ζ′(w₂).

    At w = −1 the limit −i·tan(θ/2)/4 is returned.
    """
    wc = as_complex(w)
    if _on_slit(wc, d.theta):
        raise OnSlit(f"{wc} lies on the arc |w| = 1, |arg w| <= {d.theta}")
    cot = 1.0 / math.tan(d.theta / 2.0)
    if wc == -1.0:
        return -1j / (4.0 * cot)

    w2, zeta = _chain(np.array([wc]), d.theta)
    w2, zeta = complex(w2[0]), complex(zeta[0])
    # ζ′(w₂) = −ζ / (w₂ − ζ) for the selected branch
    dzeta = -zeta / (w2 - zeta)
    return complex(dzeta * (-1j * cot) * 2.0 / (wc + 1.0) ** 2)


def inner_radius_from_chain(d: SlitComplementDomain, w: PointLike) -> float:
    """Inner radius of G at w computed from the map: (1 − |ζ|²) / |ζ′(w)|."""
    zeta = slit_map_chain(d, w).z
    return (1.0 - abs(zeta) ** 2) / abs(slit_map_derivative(d, w))


def slit_inner_radius_values(w: np.ndarray | float, theta: float) -> np.ndarray | float:
    return (1.0 - w) / math.sin(theta / 2.0) * np.sqrt(w * w - 2.0 * w * math.cos(theta) + 1.0)


def inner_radius_slit_complement(d: SlitComplementDomain, w: float) -> float:
    """
    Closed-form inner radius r(G, w) = ((1 − w)/sin(θ/2))·√(w² − 2w·cos θ + 1) on the segment [−1, 0].

    Raises:
        DomainError: If w is not a real number in [−1, 0]
    """
    if not -1.0 <= w <= 0.0:
        raise DomainError(f"w must lie in [-1, 0], got {w}")
    return float(slit_inner_radius_values(float(w), d.theta))


def inner_radius_sector(s: Sector, r: float) -> float:
    """
    Inner radius of the sector at the point r·e^{i·bisector_angle}: 4r/n.

    Raises:
        DomainError: If r <= 0
    """
    if not r > 0.0:
        raise DomainError(f"r must be positive, got {r}")
    return 4.0 * r / s.n


def sector_product_check(n: int, r: float) -> Tuple[float, float]:
    """
    Geometric mean of the inner radii of the n equal sectors at r·exp(2πi(k−1)/n), against the bound 4r/n.

    Returns:
        Tuple[float, float]: (geometric_mean, bound); equal for the sector configuration
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    radii = [inner_radius_sector(Sector(n=n, bisector_angle=2.0 * math.pi * k / n), r) for k in range(n)]
    return float(gmean(radii)), 4.0 * r / n
