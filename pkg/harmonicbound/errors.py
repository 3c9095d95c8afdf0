class HarmonicBoundError(Exception):
    """Base class for every error raised by harmonicbound."""


class DomainError(HarmonicBoundError, ValueError):
    """An argument lies outside the domain of a closed-form quantity."""


class OutsideDisk(HarmonicBoundError, ValueError):
    """A point that must lie in the open unit disk does not."""


class PointOnContinuum(HarmonicBoundError, ValueError):
    """A marked point is on (or too close to) the continuum E."""


class OnSlit(HarmonicBoundError, ValueError):
    """A point lies on the boundary arc of a slit complement domain."""


class InvalidStart(HarmonicBoundError, ValueError):
    """A random walk cannot start from the requested point."""


class QuadratureFailure(HarmonicBoundError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class InvalidPerturbation(HarmonicBoundError, ValueError):
    """A star perturbation realizes to an inadmissible continuum."""


class SceneError(HarmonicBoundError, ValueError):
    """A scene file could not be turned into a configuration."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class WalksExhausted(HarmonicBoundError, RuntimeError):
    """Every walk of an estimate hit the step cap, so no walk was scored."""
