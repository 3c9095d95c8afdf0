# standard libraries
import math

# third party libraries
import numpy as np
import pytest
from pydantic import ValidationError

# harmonicbound libraries
from harmonicbound.geometry.base import CircularArc, Configuration, Continuum, Point, Segment, as_complex


def test_point_from_complex_and_infinity():
    p = Point.from_complex(0.25 - 0.5j)
    assert p.z == 0.25 - 0.5j
    assert abs(p) == pytest.approx(abs(0.25 - 0.5j))
    assert abs(Point.infinity()) == math.inf
    with pytest.raises(ValueError):
        as_complex(Point.infinity())


def test_point_rejects_nan():
    with pytest.raises(ValidationError):
        Point(re=float("nan"), im=0.0)


def test_segment_invariants():
    with pytest.raises(ValidationError):
        Segment.between(0.5, 0.5)
    with pytest.raises(ValidationError):
        Segment.between(0.0, 1.5)
    # endpoints on the unit circle are allowed
    Segment.between(-1.0, 1.0)


def test_arc_invariants():
    arc = CircularArc(center=Point(), radius=0.5, angle0=0.0, angle1=math.pi)
    assert arc.span == pytest.approx(math.pi)
    with pytest.raises(ValidationError):
        CircularArc(center=Point(), radius=0.5, angle0=1.0, angle1=0.5)
    with pytest.raises(ValidationError):
        CircularArc(center=Point(), radius=0.5, angle0=0.0, angle1=7.0)
    with pytest.raises(ValidationError):
        CircularArc(center=Point(re=0.8), radius=0.5, angle0=-0.5, angle1=0.5)


def test_continuum_must_be_connected():
    with pytest.raises(ValidationError):
        Continuum()
    with pytest.raises(ValidationError, match="not connected"):
        Continuum(segments=[Segment.between(-0.5, -0.1), Segment.between(0.1, 0.5)])

    touching = Continuum(
        segments=[Segment.between(0.0, 1.0)],
        arcs=[CircularArc(center=Point(), radius=0.5, angle0=0.0, angle1=math.pi / 2)],
    )
    assert len(touching.pieces) == 2


def test_continuum_sample_lies_on_pieces():
    continuum = Continuum(segments=[Segment.between(0.0, 1j)])
    sample = continuum.sample(per_piece=11)
    np.testing.assert_allclose(sample.real, 0.0, atol=1e-15)
    np.testing.assert_allclose(sample.imag, np.linspace(0.0, 1.0, 11))


def test_configuration_checks_point_count_and_radius():
    continuum = Continuum(segments=[Segment.between(-1j, 1j)])
    Configuration(n=2, rho=0.5, points=[Point(re=0.5), Point(re=-0.5)], continuum=continuum)
    with pytest.raises(ValidationError, match="expected 2 points"):
        Configuration(n=2, rho=0.5, points=[Point(re=0.5)], continuum=continuum)
    with pytest.raises(ValidationError, match="not on the circle"):
        Configuration(n=2, rho=0.5, points=[Point(re=0.5), Point(re=-0.4)], continuum=continuum)
