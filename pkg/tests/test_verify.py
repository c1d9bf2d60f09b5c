import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cli import builtin_examples
from measure import AtomPiece, Measure, OverlapError, Point, SegmentPiece
from spectra import PeriodicSet1D, SpectrumSpec, cross_line_spectrum, parallel_spectrum, two_interval_spectrum_1d
from verify import (
    canonical_period,
    check_orthogonality,
    check_tiling_1d,
    classify_periodic_tiler,
    completeness_curve,
    cross_necessary_conditions,
    injectivity_scan,
    line_spectrum_feasibility,
    projection_multiplicity_probe,
    recognize_line_form,
    same_rank1_set,
    verify_spectrum,
)
from zeros import CrossConfig

from conftest import seg

HALF = Fraction(1, 2)
INTEGERS = SpectrumSpec(1, (Point.of(0),), (Point.of(1),))


@pytest.fixture
def unit_cross_spectrum(unit_cross):
    return cross_line_spectrum(unit_cross)[0]


@pytest.fixture
def sym_cross():
    return CrossConfig.of("-1/2", "-1/2", 1, 1)


def test_cross_spectrum_is_orthogonal(unit_cross, unit_cross_measure, unit_cross_spectrum):
    exact = check_orthogonality(unit_cross_measure, unit_cross_spectrum, radius=50, cross=unit_cross)
    assert exact.passed
    assert exact.violation_count == 0
    assert exact.exact_certified == exact.differences_checked > 0
    numeric = check_orthogonality(unit_cross_measure, unit_cross_spectrum, radius=20)
    assert numeric.passed


def test_translated_spectrum_keeps_orthogonality(unit_cross, unit_cross_measure, unit_cross_spectrum):
    moved = unit_cross_spectrum.translated(Point.of(Fraction(3, 10), 0))
    assert check_orthogonality(unit_cross_measure, moved, radius=20, cross=unit_cross).passed


def test_symmetric_cross_violation(sym_cross, unit_cross_spectrum):
    for cross in (sym_cross, None):
        report = check_orthogonality(sym_cross.measure(), unit_cross_spectrum, radius=5, cross=cross)
        assert report.verdict == "fail"
        assert any(v == pytest.approx(2 / math.pi) for _, _, v in report.violations)


def test_interval_with_integers(unit_interval):
    assert check_orthogonality(unit_interval, INTEGERS, radius=50).passed
    report = completeness_curve(unit_interval, INTEGERS, [0.3], [200])
    (_, _, total), = report.completeness_samples
    assert 0.995 <= total <= 1 + 1e-9
    assert report.verdict == "inconclusive"
    assert completeness_curve(unit_interval, INTEGERS, [0.3], [200], min_sum=0.995).passed


def test_partial_sums_are_monotone(unit_interval):
    report = completeness_curve(unit_interval, INTEGERS, [0.1, 0.3, 0.7], [10, 50, 200])
    by_x = {}
    for x, _, total in report.completeness_samples:
        by_x.setdefault(tuple(x), []).append(total)
    for totals in by_x.values():
        assert totals == sorted(totals)


def test_unit_cross_completeness(unit_cross, unit_cross_measure, unit_cross_spectrum):
    report = verify_spectrum(unit_cross_measure, unit_cross_spectrum, radius=500, grid=8,
                             cross=unit_cross, min_sum=0.99)
    assert report.verdict == "pass"
    assert report.bessel_max <= 1 + 1e-9
    top = [total for _, r, total in report.completeness_samples if r == 500]
    assert len(top) == 64
    assert min(top) >= 0.99


def test_symmetric_cross_plateau(sym_cross):
    diagonal = SpectrumSpec(2, (Point.of(0, 0),), (Point.of(1, -1),))
    ortho = check_orthogonality(sym_cross.measure(), diagonal, radius=20)
    assert ortho.passed
    report = completeness_curve(sym_cross.measure(), diagonal, [[0.25, 0.25]], [20, 50, 200], ortho)
    top = max(total for _, _, total in report.completeness_samples)
    assert top == pytest.approx(0.5 * (1 + 2 / math.pi), abs=0.01)
    assert top < 0.9
    assert report.verdict == "inconclusive"


def test_failed_orthogonality_makes_completeness_diagnostic(sym_cross, unit_cross_spectrum):
    report = verify_spectrum(sym_cross.measure(), unit_cross_spectrum, radius=50, grid=2, ortho_radius=5)
    assert report.verdict == "fail"
    assert report.diagnostic


def test_parallel_spectrum_is_orthogonal():
    pair = seg("-1/2", 0, "1/2", 0), seg("-1/2", 1, "1/2", 1)
    m = Measure((), pair, 2)
    for k in (1, 2):
        assert check_orthogonality(m, parallel_spectrum(*pair, k), radius=30).passed


@pytest.mark.parametrize("name", [
    "th-L", "th-parallel", "parallel-pair(1)", "parallel-pair(2)", "parallel-pair(3)", "cross(0,0,1,1)",
])
def test_builtin_constructions_are_orthogonal(name):
    example = builtin_examples(name)
    for spectrum in example.spectra:
        report = check_orthogonality(example.measure, spectrum, radius=50)
        assert report.passed
        assert report.differences_checked > 0


@pytest.mark.parametrize("offsets, period, T, target, passed", [
    ([0, HALF], 1, 1, 2, True),
    ([0], 1, 1, 2, False),
    ([0], HALF, "3/2", 3, True),
    ([0], 1, "1/2", "1/2", True),
    ([0], 1, 2, 2, False),
])
def test_tiling_identity(offsets, period, T, target, passed):
    check = check_tiling_1d(PeriodicSet1D.of(offsets, period), T, target)
    assert check.method == "lattice-sum"
    assert check.passed is passed


def test_tiling_truncated_sum():
    check = check_tiling_1d(PeriodicSet1D.of([0], 1), "sqrt2", "sqrt2", grid=4)
    assert check.method == "truncated"
    assert not check.passed
    assert check.tail_bound < 1e-6


@pytest.mark.parametrize("offsets, period", [([0, HALF], 1), ([0], HALF), ([0, "1/4", 1, "5/4"], 2)])
def test_canonical_period(offsets, period):
    assert canonical_period(offsets, 1, 1).period == period


def test_canonical_period_errors():
    with pytest.raises(ValueError):
        canonical_period([0], 1, 0)
    with pytest.raises(ValueError):
        canonical_period([HALF], 1, 1)


def test_tiler_forms():
    quarter = classify_periodic_tiler([0, "1/4", 1, "5/4"], 1)
    assert quarter.form == "{0,alpha}+Z"
    assert quarter.alpha == Fraction(1, 4)
    assert quarter.newton_consistent
    half = classify_periodic_tiler([0, "1/2", 1, "3/2"], "3/2")
    assert half.form == "half_integers"
    third = classify_periodic_tiler([0, "1/3", 1, "4/3"], "3/2")
    assert third.form == "reject"
    assert "p_2" in third.reason
    assert classify_periodic_tiler([0, "1/2", 1], 1).form == "out-of-theorem-scope"
    with pytest.raises(ValueError):
        classify_periodic_tiler(["1/2", 1], 1)
    with pytest.raises(ValueError):
        classify_periodic_tiler([0, "1/2"], "1/2")


@settings(max_examples=50, derandomize=True)
@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(98, 100), max_denominator=100))
def test_tiler_accepts_and_rejects(alpha):
    accepted = classify_periodic_tiler([0, alpha, 1, 1 + alpha], 1)
    assert accepted.form == "{0,alpha}+Z" and accepted.alpha == alpha
    nudged = classify_periodic_tiler([0, alpha, 1, 1 + alpha + Fraction(1, 1000)], 1)
    assert nudged.form == "reject"


def test_scan_unit_cross(unit_cross_measure):
    scan = injectivity_scan(unit_cross_measure)
    assert not scan.is_empty()
    assert scan.contains_direction(Point.of(1, -1))
    assert not scan.contains_direction(Point.of(1, 1))
    assert not scan.contains_direction([1.0, 0.0])


def test_scan_four_segments_is_empty(th_l_measure):
    scan = injectivity_scan(th_l_measure)
    assert scan.is_empty()
    assert line_spectrum_feasibility(th_l_measure).obstruction == "no injective direction"


@pytest.mark.parametrize("theta", [0.1, 0.5, 1.0, 1.7, 2.0, 2.5, 3.0])
def test_scan_agrees_with_sampled_multiplicity(unit_cross_measure, theta):
    u = np.array([math.cos(theta), math.sin(theta)])
    injective = injectivity_scan(unit_cross_measure).contains_direction(u)
    assert injective == (projection_multiplicity_probe(unit_cross_measure, u, samples=2000) == 1)


def test_sampled_multiplicity_counts_stacked_shadows(unit_cross_measure):
    assert projection_multiplicity_probe(unit_cross_measure, Point.of(1, 1), samples=500) == 2
    assert projection_multiplicity_probe(unit_cross_measure, Point.of(0, 1), samples=500) == 2


def test_three_parallel_segments_have_incommensurable_gaps():
    m = builtin_examples("th-parallel").measure
    assert not injectivity_scan(m).is_empty()
    result = line_spectrum_feasibility(m)
    assert not result.feasible
    assert result.status == "infeasible"
    assert result.obstruction == "incommensurable gaps"
    assert result.exact


def test_parallel_pair_is_feasible():
    m = Measure((), (seg(0, 0, 1, 0), seg(0, 1, 1, 1)), 2)
    result = line_spectrum_feasibility(m)
    assert result.feasible and result.status == "line-spectrum"
    assert len(result.directions) == 3


def test_unit_cross_feasibility(unit_cross_measure):
    result = line_spectrum_feasibility(unit_cross_measure)
    assert result.status == "line-spectrum"
    (direction,) = result.directions
    assert direction.is_parallel_to(Point.of(1, -1))


def test_equal_parallel_segments_with_integer_gaps():
    m = Measure((), (seg(0, 0, 1, 0), seg(0, 1, 1, 1), seg(0, 2, 1, 2)), 2)
    result = line_spectrum_feasibility(m)
    assert result.feasible
    assert result.status == "necessary-conditions-hold"
    assert result.directions


@pytest.mark.parametrize("T, form", [(Fraction(1), "{0,alpha}+Z"), (Fraction(3, 2), "half_integers")])
def test_tiler_forms_match_tiling_on_twelfths(T, form):
    # every {0, a, b, c} on (1/12)Z in [0, 2): the tiling identity at level 2T is the ground truth
    mismatches = []
    for rest in itertools.combinations(range(1, 24), 3):
        offsets = [Fraction(0), *(Fraction(k, 12) for k in rest)]
        tiles = check_tiling_1d(PeriodicSet1D.of(offsets, 2), T, 2 * T).passed
        accepted = classify_periodic_tiler(offsets, T).form == form
        if tiles != accepted:
            mismatches.append(offsets)
    assert mismatches == []


@pytest.mark.parametrize("len1, len2, gap", [
    (1, 1, 1), (Fraction(3, 2), HALF, 2), (2, 2, 2), (1, 1, 0),
])
def test_two_interval_spectra_are_complete(len1, len2, gap):
    a, b = Fraction(len1), Fraction(len1) + Fraction(gap)
    m = Measure((), (
        SegmentPiece(Point.of(0), Point.of(a), len1),
        SegmentPiece(Point.of(b), Point.of(b + Fraction(len2)), len2),
    ), 1)
    spectrum = two_interval_spectrum_1d(len1, len2, gap).to_spectrum()
    assert check_orthogonality(m, spectrum, radius=50).passed
    report = completeness_curve(m, spectrum, [0.05, 0.3, 0.61, 0.9], [50, 200])
    top = [total for _, r, total in report.completeness_samples if r == 200]
    assert min(top) >= 0.995
    assert report.bessel_max <= 1 + 1e-9


@pytest.mark.parametrize("name", ["th-L", "parallel-pair(2)", "cross(0,0,3/2,1/2)"])
def test_bessel_bound_at_growing_radii(name):
    example = builtin_examples(name)
    xs = [[0.1, 0.2], [0.45, 0.8], [0.9, 0.35]]
    for spectrum in example.spectra:
        report = completeness_curve(example.measure, spectrum, xs, [50, 200, 500])
        assert {r for _, r, _ in report.completeness_samples} == {50.0, 200.0, 500.0}
        assert report.bessel_max <= 1 + 1e-9


def test_finite_spectrum_checks_every_pair():
    coin = Measure((AtomPiece(Point.of(0), HALF), AtomPiece(Point.of(1), HALF)), (), 1)
    report = check_orthogonality(coin, SpectrumSpec(1, (Point.of(0), Point.of(HALF))), radius=5)
    assert report.passed
    assert report.differences_checked == 1
    quarter = check_orthogonality(coin, SpectrumSpec(1, (Point.of(0), Point.of(Fraction(1, 4)))), radius=5)
    assert quarter.violation_count == 1
    assert quarter.violations[0][2] == pytest.approx(math.sqrt(2) / 2)


def random_three_segments(seed):
    rng = np.random.default_rng(seed)
    while True:
        coords = rng.integers(-3, 4, size=(3, 4)).tolist()
        if any((x1, y1) == (x2, y2) for x1, y1, x2, y2 in coords):
            continue
        try:
            return Measure((), tuple(SegmentPiece(Point.of(*row[:2]), Point.of(*row[2:]), 1) for row in coords), 2)
        except OverlapError:
            continue


@pytest.mark.parametrize("seed", range(20))
def test_scan_agrees_with_sampling_on_random_segments(seed):
    m = random_three_segments(seed)
    scan = injectivity_scan(m)
    angles = sorted(c.angle for c in scan.critical)
    for lo, hi in zip(angles, angles[1:] + [angles[0] + math.pi]):
        if hi - lo <= 0.05:
            continue
        mid = 0.5 * (lo + hi)
        u = np.array([math.cos(mid), math.sin(mid)])
        sampled = projection_multiplicity_probe(m, u, samples=20000) == 1
        assert scan.contains_direction(u) == sampled, f"arc ({lo:.4f}, {hi:.4f})"


def diagonal_spectrum(alpha, u=(1, -1)):
    u = Point.of(*u)
    return SpectrumSpec(2, (Point.of(0, 0), u.scale(alpha)), (u,))


def test_canonical_cross_spectrum_meets_every_condition(unit_cross):
    s = cross_line_spectrum(unit_cross)[0]
    report = cross_necessary_conditions(unit_cross, s)
    assert report.passed, report.failed()
    assert {c.name for c in report.conditions} >= {
        "differences-on-T-lines", "off-product-grid", "multiplicity-one", "periodic-projections",
        "projection-density", "orthogonal-in-ball",
    }
    form = recognize_line_form(unit_cross, s)
    assert form.matches and form.canonical
    assert form.line == "y=-x"
    assert form.alpha == HALF


def test_other_admissible_alpha_is_recognised():
    c = CrossConfig.of(1, 1, 1, 1)
    assert cross_line_spectrum(c)[0].offsets[1] == Point.of(Fraction(1, 6), Fraction(-1, 6))

    form = recognize_line_form(c, diagonal_spectrum(Fraction(5, 6)))
    assert form.matches and not form.canonical
    assert form.alpha == Fraction(-1, 6)
    assert cross_necessary_conditions(c, diagonal_spectrum(Fraction(5, 6))).passed

    third = diagonal_spectrum(Fraction(1, 3))
    assert not recognize_line_form(c, third).matches
    report = cross_necessary_conditions(c, third)
    assert "orthogonal-in-ball" in report.failed()
    assert "differences-on-T-lines" not in report.failed()


def test_unequal_lengths_need_half_integers_on_a_diagonal():
    c = CrossConfig.of(0, 0, Fraction(3, 2), HALF)
    s = cross_line_spectrum(c)[0]
    form = recognize_line_form(c, s)
    assert form.matches and form.alpha is None
    assert cross_necessary_conditions(c, s).passed
    assert not recognize_line_form(c, diagonal_spectrum(HALF, (1, 1))).matches


def test_planar_lattice_fails_structural_conditions(unit_cross):
    grid = SpectrumSpec(2, (Point.of(0, 0),), (Point.of(1, 0), Point.of(0, 1)))
    report = cross_necessary_conditions(unit_cross, grid, radius=5)
    assert {"rank-at-most-one", "off-product-grid", "periodic-projections"} <= set(report.failed())
    assert not recognize_line_form(unit_cross, grid).matches


def test_axis_parallel_generator_is_not_a_line_form(unit_cross):
    horizontal = SpectrumSpec(2, (Point.of(0, 0),), (Point.of(1, 0),))
    form = recognize_line_form(unit_cross, horizontal)
    assert not form.matches and form.line is None
    assert "periodic-projections" in cross_necessary_conditions(unit_cross, horizontal).failed()


def test_half_integer_line_equals_two_offset_form():
    u = Point.of(1, -1)
    halves = SpectrumSpec(2, (Point.of(0, 0),), (u.scale(HALF),))
    assert same_rank1_set(halves, diagonal_spectrum(HALF))
    assert not same_rank1_set(halves, diagonal_spectrum(Fraction(1, 3)))
