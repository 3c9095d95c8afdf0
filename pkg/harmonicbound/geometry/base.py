# standard libraries
import math
from typing import List

# third party libraries
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator, model_validator

# harmonicbound libraries
from harmonicbound.geometry.distance import (
    ArcPiece,
    ContinuumArrays,
    Piece,
    SegmentPiece,
    connected_piece_groups,
    pack_pieces,
    sample_pieces,
)
from harmonicbound.utils import DISK_TOLERANCE, TWO_PI, arc_span_max_modulus

RADIUS_TOLERANCE = 1e-12  # |a_k| = rho check


class Point(BaseModel):
    """A point of the complex plane, or the point at infinity"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    re: float = Field(0.0, description="Real part")
    im: float = Field(0.0, description="Imaginary part")
    infinite: bool = Field(False, description="Marks the point at infinity (components are then ignored)")

    @field_validator("re", "im")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("point components must be finite")
        return value

    @classmethod
    def from_complex(cls, z: complex) -> "Point":
        return cls(re=float(np.real(z)), im=float(np.imag(z)))

    @classmethod
    def infinity(cls) -> "Point":
        return cls(infinite=True)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.inf if self.infinite else abs(self.z)


PointLike = Point | complex | float


def as_complex(point: PointLike) -> complex:
    """Complex value of a point given as a ``Point`` or a number."""
    if isinstance(point, Point):
        if point.infinite:
            raise ValueError("the point at infinity has no finite coordinates")
        return point.z
    return complex(point)


class Segment(BaseModel):
    """A closed line segment inside the closed unit disk"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    p0: Point = Field(..., description="First endpoint")
    p1: Point = Field(..., description="Second endpoint")

    @model_validator(mode="after")
    def _check(self) -> "Segment":
        if self.p0.infinite or self.p1.infinite:
            raise ValueError("segment endpoints must be finite")
        if self.p0.z == self.p1.z:
            raise ValueError("segment endpoints must differ")
        if max(abs(self.p0.z), abs(self.p1.z)) > 1.0 + DISK_TOLERANCE:
            raise ValueError("segment leaves the closed unit disk")
        return self

    @classmethod
    def between(cls, p0: complex, p1: complex) -> "Segment":
        return cls(p0=Point.from_complex(p0), p1=Point.from_complex(p1))

    @property
    def piece(self) -> SegmentPiece:
        return SegmentPiece(self.p0.z, self.p1.z)


class CircularArc(BaseModel):
    """A circular arc {center + radius·e^{it} : angle0 <= t <= angle1} inside the closed unit disk"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    center: Point = Field(..., description="Circle center")
    radius: PositiveFloat = Field(..., description="Circle radius")
    angle0: float = Field(..., description="Start angle (radians)")
    angle1: float = Field(..., description="End angle (radians), greater than angle0")

    @model_validator(mode="after")
    def _check(self) -> "CircularArc":
        if self.center.infinite:
            raise ValueError("arc center must be finite")
        if not math.isfinite(self.radius) or not (math.isfinite(self.angle0) and math.isfinite(self.angle1)):
            raise ValueError("arc parameters must be finite")
        if not self.angle0 < self.angle1:
            raise ValueError("angle0 must be smaller than angle1")
        if self.angle1 - self.angle0 > TWO_PI:
            raise ValueError("an arc spans at most 2π")
        if arc_span_max_modulus(self.center.z, self.radius, self.angle0, self.span) > 1.0 + DISK_TOLERANCE:
            raise ValueError("arc leaves the closed unit disk")
        return self

    @property
    def span(self) -> float:
        return self.angle1 - self.angle0

    @property
    def piece(self) -> ArcPiece:
        return ArcPiece(self.center.z, self.radius, self.angle0, self.span)


class Continuum(BaseModel):
    """A connected finite union of segments and circular arcs in the closed unit disk (the set E)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    segments: List[Segment] = Field(default_factory=list, description="Straight pieces")
    arcs: List[CircularArc] = Field(default_factory=list, description="Circular pieces")

    @model_validator(mode="after")
    def _check(self) -> "Continuum":
        pieces = self.pieces
        if not pieces:
            raise ValueError("a continuum needs at least one piece")
        labels = connected_piece_groups(pieces)
        if len(set(labels.tolist())) > 1:
            raise ValueError(f"continuum is not connected ({len(set(labels.tolist()))} separate groups of pieces)")
        return self

    @property
    def pieces(self) -> List[Piece]:
        return [s.piece for s in self.segments] + [a.piece for a in self.arcs]

    def packed(self) -> ContinuumArrays:
        """Numpy view consumed by the distance kernel."""
        return pack_pieces([s.piece for s in self.segments], [a.piece for a in self.arcs])

    def sample(self, per_piece: int = 1000) -> np.ndarray:
        """Dense sample of the point set, as complex numbers."""
        return sample_pieces(self.pieces, per_piece)


class Configuration(BaseModel):
    """A full problem instance: n marked points on |z| = rho and a continuum E"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2, description="Number of domains D_k")
    rho: float = Field(..., gt=0.0, lt=1.0, description="Radius of the circle carrying the marked points")
    points: List[Point] = Field(..., description="Marked points a_k, one per domain")
    continuum: Continuum = Field(..., description="The dividing continuum E")

    @model_validator(mode="after")
    def _check(self) -> "Configuration":
        if len(self.points) != self.n:
            raise ValueError(f"expected {self.n} points, got {len(self.points)}")
        for index, point in enumerate(self.points, start=1):
            if point.infinite:
                raise ValueError(f"point a_{index} must be finite")
            if abs(abs(point.z) - self.rho) > RADIUS_TOLERANCE:
                raise ValueError(f"point a_{index} is not on the circle |z| = {self.rho}")
        return self

    @property
    def marked(self) -> np.ndarray:
        return np.array([p.z for p in self.points], dtype=complex)
