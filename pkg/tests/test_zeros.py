import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from measure import Point, fourier_eval
from scalar import ExactScalar
from zeros import CrossConfig, cross_fourier_value, cross_zero_membership, numeric_zero_test


def lam(a, b):
    return Point((ExactScalar.parse(a), ExactScalar.parse(b)))


def test_z1_member(unit_cross):
    z = cross_zero_membership(unit_cross, lam(1, 1))
    assert z.member and z.branch == "Z1" and z.certificate == "exact"


def test_one_vanishing_term_is_not_a_zero(unit_cross):
    z = cross_zero_membership(unit_cross, lam(1, "1/2"))
    assert not z.member and z.certificate == "exact"


def test_equal_sinc_terms_odd_t(unit_cross):
    z = cross_zero_membership(unit_cross, lam("1/2", "-1/2"))
    assert z.member and z.branch == "Z2" and z.certificate == "exact"
    assert z.value < 1e-12


def test_equal_sinc_terms_even_t(unit_cross):
    z = cross_zero_membership(unit_cross, lam("1/2", "1/2"))
    assert not z.member
    assert z.value == pytest.approx(2 / math.pi)


def test_symmetric_cross_misses_diagonal_step():
    c = CrossConfig.of("-1/2", "-1/2", 1, 1)
    z = cross_zero_membership(c, lam("1/2", "-1/2"))
    assert not z.member
    assert z.value == pytest.approx(2 / math.pi)


def test_non_integer_t_is_not_a_zero(unit_cross):
    z = cross_zero_membership(unit_cross, lam("1/3", "1/5"))
    assert not z.member and z.certificate == "exact"


def test_opposite_sinc_terms_unequal_lengths():
    c = CrossConfig.of(0, 0, "1/2", "3/2")
    z = cross_zero_membership(c, lam("1/2", "-1/2"))
    assert z.member and z.certificate == "exact"
    assert z.value < 1e-12


def test_numeric_fallback(unit_cross):
    z = cross_zero_membership(unit_cross, lam("1/3", "-2/3"))
    assert not z.member
    assert z.certificate == "numeric"
    assert z.value > 0.1


def test_origin_is_rejected(unit_cross):
    with pytest.raises(ValueError):
        cross_zero_membership(unit_cross, lam(0, 0))


@pytest.mark.parametrize("args", [(0, 0, 1, 2), (0, 0, 0, 2), (0, 0, -1, 3)])
def test_cross_validation(args):
    with pytest.raises(ValueError):
        CrossConfig.of(*args)


def test_numeric_zero_test_needs_positive_tolerance(unit_cross_measure):
    assert numeric_zero_test(unit_cross_measure, [0.5, -0.5])
    with pytest.raises(ValueError):
        numeric_zero_test(unit_cross_measure, [0.5, -0.5], tol=0)


def test_json_round_trip():
    c = CrossConfig.of("1/2", "sqrt2/4", "1/2", "3/2")
    back = CrossConfig.from_json(c.to_json())
    assert (back.t1, back.t2, back.T1, back.T2) == (c.t1, c.t2, c.T1, c.T2)


@settings(max_examples=100, derandomize=True)
@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=12),
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=-5, max_value=5),
)
def test_sum_spectrum_differences_are_exact_zeros(t1, n, k):
    assume(n != -1)
    c = CrossConfig.of(t1, n - t1, 1, 1)
    alpha = Fraction(1, 2 * (n + 1))
    z = cross_zero_membership(c, lam(alpha + k, -(alpha + k)))
    assert z.member and z.certificate == "exact"
    if k:
        z = cross_zero_membership(c, lam(k, -k))
        assert z.member and z.branch == "Z1"


@settings(max_examples=100, derandomize=True)
@given(
    st.fractions(min_value=-2, max_value=2, max_denominator=8),
    st.fractions(min_value=-2, max_value=2, max_denominator=8),
    st.fractions(min_value=Fraction(1, 8), max_value=Fraction(15, 8), max_denominator=8),
    st.floats(-6, 6),
    st.floats(-6, 6),
)
def test_closed_form_matches_measure_transform(t1, t2, T1, x, y):
    c = CrossConfig.of(t1, t2, T1, 2 - T1)
    point = Point.of(x, y)
    assert cross_fourier_value(c, point) == pytest.approx(abs(fourier_eval(c.measure(), [x, y])), abs=1e-12)


quarters = st.integers(-12, 12).map(lambda k: Fraction(k, 4))
small_crosses = st.builds(
    lambda t1, t2, T1: CrossConfig.of(t1, t2, T1, 2 - T1),
    quarters.filter(lambda t: abs(t) <= 1),
    quarters.filter(lambda t: abs(t) <= 1),
    st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2)]),
)


@settings(max_examples=500, derandomize=True)
@given(small_crosses, quarters, quarters)
def test_exact_membership_agrees_with_numeric_test(c, x, y):
    assume(x or y)
    z = cross_zero_membership(c, lam(x, y), 1e-9)
    assert z.member == numeric_zero_test(c.measure(), [float(x), float(y)], 1e-9)


@settings(max_examples=100, derandomize=True)
@given(small_crosses, quarters, quarters)
def test_zero_set_is_symmetric(c, x, y):
    assume(x or y)
    assert cross_zero_membership(c, lam(x, y)).member == cross_zero_membership(c, lam(-x, -y)).member
