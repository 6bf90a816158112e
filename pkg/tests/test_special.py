import math

from hypothesis import given, strategies as st
import numpy as np
import pytest
from scipy import special as sp

from circsym.special import (
    bessel_i,
    bessel_ratio,
    integrate_periodic,
    invert_a1,
    normalize_angle,
)

# frozen before the build from an exact-rational 60-term series
I0_AT_1 = 1.2660658777520084
A1_AT_1 = 0.4463899658965345


def test_bessel_trivial_values():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i(3, 0.0) == 0.0


def test_bessel_oracle():
    assert bessel_i(0, 1.0) == pytest.approx(I0_AT_1, rel=1e-15)
    assert bessel_ratio(1, 1.0) == pytest.approx(A1_AT_1, abs=1e-12)


@pytest.mark.parametrize("order", [0, 1, 2, 3, 6, 10])
def test_bessel_matches_scipy(order):
    x = np.concatenate([np.linspace(0.0, 1.0, 11), np.geomspace(1.0, 100.0, 40)])
    got = bessel_i(order, x)
    ref = sp.iv(order, x)
    nz = ref > 0
    np.testing.assert_allclose(got[nz], ref[nz], rtol=1e-12)


@pytest.mark.parametrize("k", range(1, 7))
def test_bessel_recurrence(k):
    x = np.linspace(0.5, 50.0, 60)
    lhs = bessel_i(k + 1, x)
    rhs = bessel_i(k - 1, x) - (2 * k / x) * bessel_i(k, x)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


def test_bessel_domain_errors():
    with pytest.raises(ValueError):
        bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_i(0, -0.5)
    with pytest.raises(OverflowError):
        bessel_i(0, 701.0)


@pytest.mark.parametrize("kappa", [0.5, 1.0, 5.0, 10.0])
def test_a2_identity(kappa):
    a1 = bessel_ratio(1, kappa)
    assert bessel_ratio(2, kappa) == pytest.approx(1 - 2 * a1 / kappa, abs=1e-12)


def test_bessel_ratio_small_kappa_and_monotone():
    assert bessel_ratio(1, 1e-8) < 1e-7
    kap = np.geomspace(1e-3, 50, 200)
    for order in (1, 2, 3):
        a = bessel_ratio(order, kap)
        assert np.all(np.diff(a) > 0)
        assert np.all((a > 0) & (a < 1))


def test_bessel_ratio_needs_positive_kappa():
    with pytest.raises(ValueError):
        bessel_ratio(1, 0.0)


@pytest.mark.parametrize(
    "theta, expected",
    [(0.0, 0.0), (math.pi, -math.pi), (1.5 * math.pi, -0.5 * math.pi), (-math.pi, -math.pi)],
)
def test_normalize_examples(theta, expected):
    assert normalize_angle(theta) == pytest.approx(expected, abs=1e-15)


def test_normalize_rejects_nonfinite():
    with pytest.raises(ValueError):
        normalize_angle(float("nan"))
    with pytest.raises(ValueError):
        normalize_angle(np.array([0.0, np.inf]))


@given(st.floats(min_value=-1e4, max_value=1e4, allow_nan=False))
def test_normalize_range_idempotent_periodic(theta):
    t = normalize_angle(theta)
    assert -math.pi <= t < math.pi
    assert normalize_angle(t) == t
    shifted = normalize_angle(theta + 2 * math.pi)
    # equal up to rounding, allowing the -pi / pi seam
    gap = abs(shifted - t)
    assert min(gap, 2 * math.pi - gap) < 1e-11
    # same point on the circle
    assert abs(math.sin(t) - math.sin(theta)) < 1e-9
    assert abs(math.cos(t) - math.cos(theta)) < 1e-9


def test_integrate_periodic_examples():
    assert integrate_periodic(lambda t: np.full_like(t, 1 / (2 * np.pi)), 16) == pytest.approx(1.0, abs=1e-15)
    assert integrate_periodic(lambda t: np.sin(2 * t) ** 2 / (2 * np.pi)) == pytest.approx(0.5, abs=1e-14)
    card = integrate_periodic(lambda t: (1 + 0.9 * np.cos(t)) / (2 * np.pi))
    assert card == pytest.approx(1.0, abs=1e-12)


def test_integrate_odd_times_even_is_zero():
    val = integrate_periodic(lambda t: np.sin(3 * t) * np.exp(2 * np.cos(t)))
    assert abs(val) < 1e-12


def test_integrate_periodic_guards():
    with pytest.raises(ValueError):
        integrate_periodic(np.cos, 8)
    with pytest.raises(FloatingPointError), np.errstate(divide="ignore"):
        integrate_periodic(lambda t: 1 / np.zeros_like(t))


def test_invert_a1_round_trips():
    assert invert_a1(bessel_ratio(1, 1.0)) == pytest.approx(1.0, abs=1e-8)
    assert invert_a1(bessel_ratio(1, 10.0)) == pytest.approx(10.0, abs=1e-6)
    assert invert_a1(1e-4) < 1e-3


@given(st.floats(min_value=1e-3, max_value=0.998))
def test_invert_a1_residual(r):
    kappa = invert_a1(r)
    assert abs(bessel_ratio(1, kappa) - r) <= 1e-10


@pytest.mark.parametrize("r", [0.0, -0.1, 0.999, 1.0])
def test_invert_a1_domain(r):
    with pytest.raises(ValueError):
        invert_a1(r)
