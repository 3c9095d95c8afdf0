# standard libraries
import logging
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

# third party libraries
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

# harmonicbound libraries
from harmonicbound.errors import InvalidPerturbation, SceneError
from harmonicbound.geometry.base import CircularArc, Configuration, Continuum, Point, Segment
from harmonicbound.geometry.configuration import extremal_points, star_continuum
from harmonicbound.models.search import StarPerturbation, realize

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

Pair = Tuple[float, float]


class ArcEntry(BaseModel):
    """A circular arc as written in a scene file"""

    model_config = ConfigDict(extra="forbid")

    center: Pair = Field(..., description="Circle center [re, im]")
    radius: float = Field(..., description="Circle radius")
    angle0: float = Field(..., description="Start angle (radians)")
    angle1: float = Field(..., description="End angle (radians)")


class ContinuumEntry(BaseModel):
    """Explicit pieces of E"""

    model_config = ConfigDict(extra="forbid")

    segments: List[Tuple[Pair, Pair]] = Field(default_factory=list, description="Segments [[re, im], [re, im]]")
    arcs: List[ArcEntry] = Field(default_factory=list, description="Circular arcs")


class StarGenerator(BaseModel):
    """The star {z : (e^{iθ}z)^n ∈ [-1, 0]}"""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["star"] = "star"
    n: Optional[int] = Field(None, description="Number of spokes; defaults to the scene's n")
    theta: float = Field(0.0, description="Rotation parameter")


class PerturbedStarGenerator(BaseModel):
    """A star with displaced polyline spokes"""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["perturbed_star"] = "perturbed_star"
    n: Optional[int] = Field(None, description="Number of spokes; defaults to the scene's n")
    spoke_angle_offsets: List[float] = Field(..., description="Angular offset of each spoke")
    joint_radii: List[float] = Field([1.0 / 3.0, 2.0 / 3.0], description="Ascending joint radii in (0, 1)")
    joint_lateral_offsets: List[List[float]] = Field(..., description="n×m perpendicular joint displacements")
    theta: float = Field(0.0, description="Rotation parameter")


Generator = Annotated[Union[StarGenerator, PerturbedStarGenerator], Field(discriminator="kind")]


class SceneFile(BaseModel):
    """Versioned JSON description of a configuration"""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = Field(..., description="Scene schema version")
    n: int = Field(..., ge=2, description="Number of marked points")
    rho: float = Field(..., gt=0.0, lt=1.0, description="Radius of the marked circle")
    theta: Optional[float] = Field(None, description="Rotation; defaults to the generator's theta, else 0")
    points: Optional[List[Pair]] = Field(None, description="Marked points; defaults to ρ·exp(2πi(k−1)/n)·e^{−iθ}")
    continuum: Optional[ContinuumEntry] = Field(None, description="Explicit continuum")
    generator: Optional[Generator] = Field(None, description="Generated continuum")

    @model_validator(mode="after")
    def _one_source(self) -> "SceneFile":
        if (self.continuum is None) == (self.generator is None):
            raise ValueError("exactly one of continuum or generator is required")
        if self.generator is not None and self.generator.n not in (None, self.n):
            raise ValueError(f"generator n={self.generator.n} does not match scene n={self.n}")
        return self

    @property
    def rotation(self) -> float:
        if self.theta is not None:
            return self.theta
        return self.generator.theta if self.generator is not None else 0.0

    def _continuum(self) -> Continuum:
        if isinstance(self.generator, StarGenerator):
            return star_continuum(self.n, self.generator.theta)
        if isinstance(self.generator, PerturbedStarGenerator):
            fields = self.generator.model_dump(exclude={"kind", "n"})
            return realize(StarPerturbation(n=self.n, **fields))
        return Continuum(
            segments=[Segment.between(complex(*p0), complex(*p1)) for p0, p1 in self.continuum.segments],
            arcs=[
                CircularArc(
                    center=Point.from_complex(complex(*a.center)), radius=a.radius, angle0=a.angle0, angle1=a.angle1
                )
                for a in self.continuum.arcs
            ],
        )

    def to_configuration(self) -> Configuration:
        """
        Expand the scene into a validated configuration.

        Raises:
            SceneError: If the continuum or the points violate a configuration invariant
        """
        source = "continuum" if self.continuum is not None else "generator"
        try:
            continuum = self._continuum()
        except ValidationError as exc:
            raise SceneError(_summary(exc), source) from exc
        except InvalidPerturbation as exc:
            raise SceneError(str(exc), source) from exc

        if self.points is None:
            points = extremal_points(self.n, self.rho, self.rotation)
        else:
            points = [Point.from_complex(complex(*p)) for p in self.points]
        try:
            return Configuration(n=self.n, rho=self.rho, points=points, continuum=continuum)
        except ValidationError as exc:
            raise SceneError(_summary(exc), "points") from exc

    @classmethod
    def from_configuration(cls, cfg: Configuration, theta: Optional[float] = None) -> "SceneFile":
        """Scene with explicit points and pieces reproducing ``cfg``."""
        return cls(
            schema_version=SCHEMA_VERSION,
            n=cfg.n,
            rho=cfg.rho,
            theta=theta,
            points=[(p.re, p.im) for p in cfg.points],
            continuum=ContinuumEntry(
                segments=[((s.p0.re, s.p0.im), (s.p1.re, s.p1.im)) for s in cfg.continuum.segments],
                arcs=[
                    ArcEntry(center=(a.center.re, a.center.im), radius=a.radius, angle0=a.angle0, angle1=a.angle1)
                    for a in cfg.continuum.arcs
                ],
            ),
        )


def _summary(exc: ValidationError) -> str:
    first = exc.errors()[0]
    return first["msg"]


def _field_path(exc: ValidationError) -> Optional[str]:
    loc = exc.errors()[0]["loc"]
    return ".".join(str(part) for part in loc) or None


def parse_scene(text: str) -> SceneFile:
    """
    Parse scene JSON.

    Raises:
        SceneError: With the dotted path of the first offending field (None for malformed JSON)
    """
    try:
        return SceneFile.model_validate_json(text)
    except ValidationError as exc:
        raise SceneError(_summary(exc), _field_path(exc)) from exc


def load_scene(path: Union[str, Path]) -> SceneFile:
    """
    Read and validate a scene file.

    Args:
        path (Union[str, Path]): JSON scene file

    Raises:
        SceneError: If the file is missing, malformed or invalid

    Returns:
        SceneFile: The parsed scene
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError(f"cannot read scene {path}: {exc.strerror}") from exc
    scene = parse_scene(text)
    logger.debug("Loaded scene %s (n=%d, rho=%g)", path, scene.n, scene.rho)
    return scene


def load_configuration(path: Union[str, Path]) -> Configuration:
    return load_scene(path).to_configuration()
