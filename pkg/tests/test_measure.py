import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from measure import (
    AffineMap,
    AtomPiece,
    LineDir,
    Measure,
    OverlapError,
    Point,
    SingularMapError,
    UnsupportedOperationError,
    affine_pushforward,
    convolve,
    fourier_eval,
    project_to_line,
)
from scalar import ExactScalar, InputError

from conftest import seg

coords = st.integers(min_value=-5, max_value=5)


def test_unit_interval_transform(unit_interval):
    assert fourier_eval(unit_interval, 0.0) == pytest.approx(1.0)
    assert abs(fourier_eval(unit_interval, 1.0)) < 1e-15
    assert abs(fourier_eval(unit_interval, 0.5)) == pytest.approx(2 / math.pi)


def test_cross_transform_vanishes_on_diagonal_step(unit_cross_measure):
    assert abs(fourier_eval(unit_cross_measure, [0.5, -0.5])) < 1e-15
    batch = fourier_eval(unit_cross_measure, np.array([[0.0, 0.0], [0.5, -0.5], [1.0, -1.0]]))
    assert batch.shape == (3,)
    assert abs(batch[0]) == pytest.approx(1.0)


def test_small_frequency_is_continuous(unit_interval):
    near = fourier_eval(unit_interval, 1e-12)
    assert abs(near - 1.0) < 1e-11


def test_from_json_defaults_mass_to_length():
    m = Measure.from_json({"segments": [{"from": [0, 0], "to": [1, 1]}]})
    assert m.segments[0].mass == ExactScalar.sqrt2()
    with pytest.raises(InputError):
        Measure.from_json({"segments": [{"from": [0, 0], "to": [1, "sqrt2"]}]})


def test_json_round_trip(th_l_measure):
    assert Measure.from_json(th_l_measure.to_json()) == th_l_measure


def test_overlapping_segments_are_rejected():
    with pytest.raises(OverlapError):
        Measure((), (seg(0, 0, 2, 0), seg(1, 0, 3, 0)), 2)
    # touching end to end is fine
    Measure((), (seg(0, 0, 1, 0), seg(1, 0, 2, 0)), 2)


def test_normalized_is_probability(th_l_measure):
    mp, factor = th_l_measure.normalized()
    assert mp.total_mass == 1
    assert factor == ExactScalar(1) / 4


def test_singular_pushforward():
    with pytest.raises(SingularMapError):
        affine_pushforward(Measure((), (seg(0, 0, 1, 0),), 2), [[1, 1], [1, 1]])


def test_convolution_translates_segments():
    line = Measure((), (seg(0, 0, 1, 0),), 2)
    atoms = Measure((AtomPiece(Point.of(0, 0), ExactScalar(1) / 2), AtomPiece(Point.of(0, 3), ExactScalar(1) / 2)), (), 2)
    result = convolve(line, atoms)
    assert sorted(s.start.sort_key() for s in result.segments) == [
        Point.of(0, 0).sort_key(), Point.of(0, 3).sort_key()
    ]
    assert result.total_mass == 1
    with pytest.raises(UnsupportedOperationError):
        convolve(line, line)


def test_perp_and_lines():
    assert Point.of(1, 2).perp() == Point.of(2, -1)
    L = LineDir.of(1, 1)
    t = ExactScalar.parse("3/7")
    assert L.coordinate(L.lift(t)) == t
    assert L.exact_unit
    assert not LineDir.of(1, 2).exact_unit


def test_affine_inverse_composes_to_identity():
    T = AffineMap(((2, 1), (0, "sqrt2")), Point.of(1, -1))
    assert T.compose(T.inverse()) == AffineMap.identity(2)


def test_projection_of_cross(unit_cross_measure):
    anti = project_to_line(unit_cross_measure, LineDir.of(1, -1))
    assert anti.injective()
    assert anti.measure.total_mass == 1
    diag = project_to_line(unit_cross_measure, LineDir.of(1, 1))
    assert not diag.injective()
    assert diag.multiplicity.max_multiplicity() == 2
    vertical = project_to_line(unit_cross_measure, LineDir.of(0, 1))
    assert not vertical.injective()


@pytest.mark.parametrize("direction", [(1, -1), (1, 2), (3, 4)])
def test_projection_transform_matches_restriction(unit_cross_measure, direction):
    L = LineDir.of(*direction)
    proj = project_to_line(unit_cross_measure, L)
    u = L.unit_floats()
    for t in (0.3, 1.7, -2.25):
        assert proj.fourier(t) == pytest.approx(fourier_eval(unit_cross_measure, t * u), abs=1e-12)


@settings(max_examples=100, derandomize=True)
@given(coords, coords, coords, coords, st.floats(-3, 3), st.floats(-3, 3))
def test_translation_changes_phase_only(x0, y0, bx, by, xi1, xi2):
    m = Measure((), (seg(x0, y0, x0 + 1, y0), seg(x0, y0 + 2, x0, y0 + 3)), 2)
    moved = m.translated(Point.of(bx, by))
    xi = [xi1, xi2]
    assert abs(fourier_eval(moved, xi)) == pytest.approx(abs(fourier_eval(m, xi)), abs=1e-12)


@settings(max_examples=100, derandomize=True)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_transform_bounded_by_mass(xi1, xi2):
    m = Measure((AtomPiece(Point.of(0, 0), 2),), (seg(0, 0, 3, 4),), 2)
    assert abs(fourier_eval(m, [xi1, xi2])) <= m.total_mass.to_float() + 1e-12


def test_atom_convolution_merges_coincident_atoms():
    half = ExactScalar(1) / 2
    coin = Measure((AtomPiece(Point.of(0), half), AtomPiece(Point.of(1), half)), (), 1)
    result = convolve(coin, coin)
    masses = {a.at[0].to_float(): a.mass for a in result.atoms}
    assert masses == {0.0: ExactScalar(1) / 4, 1.0: half, 2.0: ExactScalar(1) / 4}


def test_pushforward_shift_applies_to_map_and_matrix_alike(unit_cross_measure):
    rows = [[2, 1], [0, 1]]
    from_rows = affine_pushforward(unit_cross_measure, rows, (1, -1))
    from_map = affine_pushforward(unit_cross_measure, AffineMap.linear(rows), Point.of(1, -1))
    assert from_rows == from_map
    assert from_rows.segments[0].start == Point.of(1, -1)
    shifted_map = AffineMap(AffineMap.linear(rows).matrix, Point.of(1, 0))
    assert affine_pushforward(unit_cross_measure, shifted_map, (0, -1)) == from_rows
    with pytest.raises(ValueError):
        affine_pushforward(unit_cross_measure, rows, (1, 2, 3))


@st.composite
def segment_and_atom(draw):
    x0, y0, x1, y1, ax, ay = (draw(coords) for _ in range(6))
    if (x0, y0) == (x1, y1):
        x1 += 1
    return Measure((AtomPiece(Point.of(ax, ay), draw(st.integers(1, 3))),), (seg(x0, y0, x1, y1, mass=1),), 2)


frequencies = st.floats(-4, 4, allow_nan=False)


@settings(max_examples=100, derandomize=True)
@given(segment_and_atom(), frequencies, frequencies)
def test_hermitian_symmetry(m, xi1, xi2):
    assert fourier_eval(m, [-xi1, -xi2]) == pytest.approx(fourier_eval(m, [xi1, xi2]).conjugate(), abs=1e-12)


@settings(max_examples=100, derandomize=True)
@given(segment_and_atom(), coords, coords, st.integers(1, 4), frequencies, frequencies)
def test_convolution_multiplies_transforms(m, bx, by, w, xi1, xi2):
    atoms = Measure((AtomPiece(Point.of(0, 0), 1), AtomPiece(Point.of(bx, by), w)), (), 2)
    xi = [xi1, xi2]
    expected = fourier_eval(m, xi) * fourier_eval(atoms, xi)
    assert fourier_eval(convolve(m, atoms), xi) == pytest.approx(expected, abs=1e-9)


@settings(max_examples=100, derandomize=True)
@given(segment_and_atom(), st.tuples(coords, coords, coords, coords), coords, coords, frequencies, frequencies)
def test_affine_covariance(m, entries, bx, by, xi1, xi2):
    a, b, c, d = entries
    assume(a * d - b * c != 0)
    rows = [[a, b], [c, d]]
    moved = affine_pushforward(m, rows, (bx, by))
    xi = np.array([xi1, xi2])
    A = np.array(rows, dtype=float)
    phase = np.exp(-2j * np.pi * (xi @ np.array([bx, by], dtype=float)))
    assert fourier_eval(moved, xi) == pytest.approx(phase * fourier_eval(m, A.T @ xi), abs=1e-9)


@settings(max_examples=100, derandomize=True)
@given(segment_and_atom(), st.integers(-4, 4), st.integers(-4, 4), st.floats(-5, 5, allow_nan=False))
def test_projection_transform_is_restriction(m, v1, v2, t):
    if (v1, v2) == (0, 0):
        v1 = 1
    L = LineDir.of(v1, v2)
    proj = project_to_line(m, L)
    assert proj.fourier(t) == pytest.approx(fourier_eval(m, t * L.unit_floats()), abs=1e-9)
