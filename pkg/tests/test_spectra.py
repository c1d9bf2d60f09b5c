from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from classify import NonSpectralError, TwoSegmentInput
from measure import AtomPiece, LineDir, Measure, Point, SingularMapError
from scalar import ExactScalar
from spectra import (
    PeriodicSet1D,
    SpectrumSpec,
    OrthogonalSplit,
    SubspaceError,
    choose_projection_line,
    cross_line_spectrum,
    equal_spaced_atoms_spectrum,
    lift_1d_spectrum,
    parallel_spectrum,
    pullback_spectrum_affine,
    sumset_spectrum,
    two_interval_spectrum_1d,
    two_segment_spectra,
    validate_sumset_support,
)
from zeros import CrossConfig

from conftest import seg

HALF = Fraction(1, 2)
ORIGIN = Point.of(0, 0)


@pytest.fixture
def centred_pair():
    return seg("-1/2", 0, "1/2", 0), seg("-1/2", 1, "1/2", 1)


def test_unit_cross_spectrum(unit_cross):
    (spec,) = cross_line_spectrum(unit_cross)
    assert spec.offsets == (ORIGIN, Point.of(HALF, -HALF))
    assert spec.lattice == (Point.of(1, -1),)


def test_unequal_cross_spectrum():
    (spec,) = cross_line_spectrum(CrossConfig.of(0, 0, "3/2", "1/2"))
    assert spec.offsets == (ORIGIN,)
    assert spec.lattice == (Point.of(HALF, -HALF),)


def test_two_conditions_give_two_spectra():
    anti, diag = cross_line_spectrum(CrossConfig.of(1, 0, 1, 1))
    assert anti.contains(Point.of(Fraction(1, 4), Fraction(-1, 4)))
    assert anti.lattice == (Point.of(1, -1),)
    assert diag.contains(Point.of(HALF, HALF))
    assert diag.lattice == (Point.of(1, 1),)


def test_non_spectral_cross_has_no_spectrum():
    with pytest.raises(NonSpectralError):
        cross_line_spectrum(CrossConfig.of("-1/2", "-1/2", 1, 1))


def test_axis_projections_are_periodic(unit_cross):
    (spec,) = cross_line_spectrum(unit_cross)
    xs, ys = spec.axis_projections()
    assert xs == PeriodicSet1D.of([0, HALF], 1)
    assert ys == PeriodicSet1D.of([0, HALF], 1)
    assert spec.has_multiplicity_one()


def test_count_in_ball():
    spec = SpectrumSpec(2, (ORIGIN,), (Point.of(HALF, -HALF),))
    assert spec.count_in_ball([0.0, 0.0], 10) == 29
    assert spec.count_in_ball(ORIGIN, 0.5) == 1


@pytest.mark.parametrize("len1, len2, gap, offsets, period", [
    (1, 1, 0, [0, HALF], 1),
    (1, 1, 1, [0, Fraction(1, 4)], 1),
    ("3/2", "1/2", 2, [0], HALF),
    (2, 2, 2, [0, Fraction(1, 8)], HALF),
])
def test_two_interval_spectrum(len1, len2, gap, offsets, period):
    assert two_interval_spectrum_1d(len1, len2, gap) == PeriodicSet1D.of(offsets, period)


def test_two_interval_spectrum_rejects_bad_gap():
    with pytest.raises(NonSpectralError):
        two_interval_spectrum_1d("3/2", "1/2", 1)


@pytest.mark.parametrize("k, direction", [(1, (1, 3)), (2, (1, 5)), (0, (1, 1))])
def test_projection_line(centred_pair, k, direction):
    assert choose_projection_line(*centred_pair, k).direction == Point.of(*direction)


def test_projection_line_errors(centred_pair):
    with pytest.raises(ValueError):
        choose_projection_line(*centred_pair, -1)
    with pytest.raises(ValueError):
        choose_projection_line(seg(0, 0, 1, 0), seg(2, 0, 3, 0), 1)


def test_parallel_spectrum(centred_pair):
    spec = parallel_spectrum(*centred_pair, 1)
    assert spec.lattice == (Point.of(1, 3),)
    assert spec.contains(Point.of(Fraction(1, 6), HALF))
    wider = parallel_spectrum(*centred_pair, 2)
    assert wider.contains(Point.of(Fraction(1, 10), HALF))


def test_single_interval_projection(centred_pair):
    spec = parallel_spectrum(*centred_pair, 0)
    assert spec.lattice == (Point.of(1, 1),)
    assert spec.contains(Point.of(HALF, HALF))


def test_lift_onto_lines():
    half_z = PeriodicSet1D.of([0], HALF)
    lifted = lift_1d_spectrum(half_z, LineDir.of(1, -1))
    q = ExactScalar.sqrt2() / 4
    assert lifted.lattice == (Point.of(q, -q),)
    integers = lift_1d_spectrum(PeriodicSet1D.of([0], 1), LineDir.of(1, 0))
    assert integers.lattice == (Point.of(1, 0),)


def test_sumset_of_line_and_atoms():
    line = SpectrumSpec(2, (ORIGIN,), (Point.of(Fraction(1, 100), 0),))
    atoms = equal_spaced_atoms_spectrum(3, 1, LineDir.of(0, 1))
    assert atoms.offsets == (ORIGIN, Point.of(0, Fraction(1, 3)), Point.of(0, Fraction(2, 3)))
    spec = sumset_spectrum(line, atoms)
    assert len(spec.offsets) == 3
    assert spec.lattice == line.lattice
    assert sumset_spectrum(line, SpectrumSpec(2, (ORIGIN,))) == SpectrumSpec(
        2, line.offsets, line.lattice, note=spec.note
    )
    with pytest.raises(SubspaceError):
        sumset_spectrum(atoms, line)


def test_diagonal_atoms_spectrum():
    spec = equal_spaced_atoms_spectrum(2, ExactScalar.sqrt2(), LineDir.of(1, 1))
    assert spec.offsets == (ORIGIN, Point.of(Fraction(1, 4), Fraction(1, 4)))
    with pytest.raises(ValueError):
        equal_spaced_atoms_spectrum(0, 1, LineDir.of(1, 0))


def test_pullback():
    spec = SpectrumSpec(2, (ORIGIN,), (Point.of(HALF, -HALF),))
    assert pullback_spectrum_affine(spec, [[1, 0], [0, 1]]) == spec
    assert pullback_spectrum_affine(spec, [[2, 0], [0, 1]]).lattice == (Point.of(1, -HALF),)
    with pytest.raises(SingularMapError):
        pullback_spectrum_affine(spec, [[1, 2], [2, 4]])


def test_diagonal_pair_spectrum_lies_on_bisector():
    (spec,) = two_segment_spectra(TwoSegmentInput(seg(0, 0, 1, 1), seg(0, 0, 1, -1)))
    assert spec.lattice == (Point.of(0, 1),)
    assert spec.contains(Point.of(0, HALF))


def test_periodic_set_normalization():
    s = PeriodicSet1D.of([0, Fraction(5, 4)], 1)
    assert s.offsets == (0, Fraction(1, 4))
    assert s.density == 2
    with pytest.raises(ValueError):
        PeriodicSet1D.of([HALF], 1)
    assert PeriodicSet1D.of([0, 1], 1).has_multiplicity()


def test_spectrum_invariants():
    with pytest.raises(ValueError):
        SpectrumSpec(2, (ORIGIN, Point.of(1, -1)), (Point.of(1, -1),))
    with pytest.raises(ValueError):
        SpectrumSpec(2, (Point.of(HALF, 0),), ())
    spec = SpectrumSpec(2, (ORIGIN, Point.of(Fraction(3, 2), Fraction(-3, 2))), (Point.of(1, -1),))
    assert spec.offsets[1] == Point.of(HALF, -HALF)
    assert SpectrumSpec.from_json(spec.to_json()) == spec


@settings(max_examples=100, derandomize=True)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=10), st.integers(-6, 6))
def test_sum_spectra_sit_in_integer_level_sets(t1, n):
    assume(n != -1)
    c = CrossConfig.of(t1, n - t1, 1, 1)
    for spec in cross_line_spectrum(c):
        assert spec.has_multiplicity_one()
        for p in (*spec.offsets, *spec.lattice):
            assert c.t_value(p).is_integer()


def test_sumset_support_must_sit_on_perp_translate():
    split = OrthogonalSplit.coordinate(2, 1)
    vertical = Measure((AtomPiece(Point.of(2, 0), 1), AtomPiece(Point.of(2, 1), 1)), (), 2)
    validate_sumset_support(vertical, split)
    slanted = Measure((AtomPiece(Point.of(0, 0), 1), AtomPiece(Point.of(1, 1), 1)), (), 2)
    with pytest.raises(SubspaceError):
        validate_sumset_support(slanted, split)
