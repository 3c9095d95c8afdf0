# standard libraries
import math

# third party libraries
import mpmath
import numpy as np
import pytest

# harmonicbound libraries
from harmonicbound.errors import DomainError
from harmonicbound.geometry.base import Configuration, Continuum, Segment
from harmonicbound.geometry.configuration import extremal_configuration, extremal_points, star_continuum
from harmonicbound.models.extremal_bound import (
    Verdict,
    bound_report,
    check_inequality,
    identity_suite,
    integral_identity_check,
    minmax_lower_bound,
    parse_grid,
    psi,
    psi_derivative,
    psi_inverse,
    psi_mean,
    radial_chain_check,
)
from harmonicbound.models.harmonic_measure import Estimate, WosParams, extremal_measure


def _estimate(mean: float, samples: int = 1_000_000) -> Estimate:
    hit_e = int(round(mean * samples))
    return Estimate.from_counts(hit_e, samples - hit_e, 0)


def test_psi_values():
    assert psi(0.0) == 0.0
    assert psi(1.0) == math.inf
    assert psi(0.5) == pytest.approx(math.log((1 + math.sqrt(0.5)) / (1 - math.sqrt(0.5))))
    with pytest.raises(DomainError):
        psi(1.5)


@pytest.mark.parametrize("x", [0.01, 0.3, 0.75, 0.999999])
def test_psi_matches_high_precision(x):
    mpmath.mp.dps = 50
    s = mpmath.sin(mpmath.pi * mpmath.mpf(x) / 2)
    assert psi(x) == pytest.approx(float(mpmath.log((1 + s) / (1 - s))), rel=1e-13)


def test_psi_inverse_round_trip_and_infinity():
    for x in np.linspace(0.0, 0.999, 50):
        assert psi_inverse(psi(float(x))) == pytest.approx(float(x), abs=1e-12)
    assert psi_inverse(math.inf) == 1.0
    with pytest.raises(DomainError):
        psi_inverse(-1.0)


def test_psi_derivative_matches_finite_difference():
    x, h = 0.4, 1e-6
    assert psi_derivative(x) == pytest.approx((psi(x + h) - psi(x - h)) / (2 * h), rel=1e-8)
    assert psi_derivative(0.0) == pytest.approx(math.pi)


def test_psi_mean_of_equal_measures():
    assert psi_mean([0.3, 0.3, 0.3]) == pytest.approx(0.3, abs=1e-14)
    assert 0.2 < psi_mean([0.2, 0.4]) < 0.4


@pytest.mark.parametrize("n", [2, 3, 5, 8])
@pytest.mark.parametrize("rho", [0.05, 0.5, 0.95])
def test_extremal_closure(n, rho):
    target = -n * math.log(rho)
    omega = extremal_measure(n, rho)
    # ω* rounds to a double, and Ψ′(ω*)·ulp(ω*) reaches 1e-11 when 1 − ω* is small
    assert abs(psi(omega) - target) <= 1e-12 + psi_derivative(omega) * math.ulp(omega)
    assert minmax_lower_bound(n, rho) == omega


@pytest.mark.parametrize("theta", [0.05, 0.7, math.pi / 2, 3.09])
def test_integral_identity(theta):
    quadrature, closed_form = integral_identity_check(theta)
    assert abs(quadrature - closed_form) <= 1e-10


def test_integral_identity_high_precision():
    mpmath.mp.dps = 30
    theta = mpmath.mpf(1.0)

    def inverse_radius(w):
        return mpmath.sin(theta / 2) / ((1 - w) * mpmath.sqrt(w * w - 2 * w * mpmath.cos(theta) + 1))

    exact = mpmath.quad(inverse_radius, [-1, 0])
    quadrature, closed_form = integral_identity_check(1.0)
    assert closed_form == pytest.approx(float(exact), rel=1e-13)
    assert quadrature == pytest.approx(float(exact), rel=1e-12)


def test_integral_identity_rejects_degenerate_slits():
    with pytest.raises(DomainError):
        integral_identity_check(0.001)
    with pytest.raises(DomainError):
        integral_identity_check(math.pi)


def test_radial_chain_closes_at_star():
    radial, bound = radial_chain_check(3, 0.5)
    assert abs(radial - bound) <= 1e-12
    assert abs(0.25 * psi(extremal_measure(3, 0.5)) - bound) <= 1e-12


def test_parse_grid():
    grid = parse_grid("0.05:3.09:0.05")
    assert len(grid) == 61
    assert grid[-1] == pytest.approx(3.05)
    assert len(parse_grid("0.5:1.0:0.25")) == 3
    np.testing.assert_allclose(parse_grid("0:1:0.25"), [0.0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(DomainError):
        parse_grid("0:1")
    with pytest.raises(DomainError):
        parse_grid("1:0:0.1")


def test_identity_suite_passes_by_default():
    frame = identity_suite()
    assert frame["passed"].all()
    assert (frame["check"] == "integral_identity").sum() == 61
    assert (frame["check"] == "psi_round_trip").sum() == 1000
    assert set(frame["check"]) == {
        "integral_identity",
        "psi_round_trip",
        "extremal_closure",
        "radial_chain",
        "chain_closure",
        "sector_product",
    }

    closure = frame[frame["check"].isin(["extremal_closure", "radial_chain", "chain_closure"])]
    assert len(closure) == 3 * 7 * 19
    np.testing.assert_array_equal(closure["residual"], (closure["value"] - closure["reference"]).abs())
    assert (closure["tol"] < 1e-10).all()


def test_identity_suite_fails_below_double_precision():
    frame = identity_suite("0.5:1.0:0.25", tol=1e-16)
    assert not frame["passed"].all()
    assert (frame["tol"] == 1e-16).all()


def test_bound_report_at_equality_is_within_noise():
    omega = extremal_measure(3, 0.5)
    report = bound_report([_estimate(omega)] * 3, 0.5)
    assert report.rhs == pytest.approx(2.0794415417, abs=1e-10)
    assert report.lhs == pytest.approx(report.rhs, abs=5 * report.lhs_stderr)
    assert report.verdict is Verdict.HOLDS_WITHIN_NOISE
    assert report.psi_mean == pytest.approx(omega, abs=1e-3)


def test_bound_report_verdicts():
    assert bound_report([_estimate(0.8)] * 2, 0.5).verdict is Verdict.HOLDS
    assert bound_report([_estimate(0.2)] * 2, 0.5).verdict is Verdict.VIOLATION_CANDIDATE

    saturated = bound_report([_estimate(1.0), _estimate(0.1)], 0.5)
    assert saturated.lhs == math.inf
    assert saturated.verdict is Verdict.HOLDS
    assert '"lhs":Infinity' in saturated.model_dump_json()


def test_psi_average_dominates_psi_of_average():
    rng = np.random.default_rng(4)
    for _ in range(200):
        omegas = rng.uniform(0.0, 0.999, rng.integers(2, 9))
        assert np.mean([psi(w) for w in omegas]) >= psi(float(np.mean(omegas))) - 1e-12
        assert psi_mean(omegas) >= float(np.mean(omegas)) - 1e-12


def test_reported_left_side_dominates_psi_of_average_estimate():
    cfg = extremal_configuration(3, 0.5)
    report = check_inequality(cfg, WosParams(epsilon=1e-3, samples=4096, seed=9))
    means = [e.mean for e in report.omegas]
    assert report.lhs >= psi(float(np.mean(means))) - 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("rho", [0.3, 0.5, 0.7])
def test_check_inequality_equality_grid(n, rho):
    report = check_inequality(extremal_configuration(n, rho), WosParams())
    assert report.rhs == -n * math.log(rho)
    assert report.verdict is not Verdict.VIOLATION_CANDIDATE
    assert abs(report.margin) <= 3 * report.lhs_stderr


@pytest.mark.slow
def test_strict_inequality_for_strict_superset_of_star():
    star = star_continuum(2)
    extra = Segment.between(0j, 0.3 + 0j)
    cfg = Configuration(
        n=2,
        rho=0.5,
        points=extremal_points(2, 0.5),
        continuum=Continuum(segments=star.segments + [extra]),
    )
    report = check_inequality(cfg, WosParams(samples=100_000, seed=4))
    assert report.verdict is Verdict.HOLDS
    assert report.margin > 0
