#!/usr/bin/env python3
"""
Explicit spectrum constructors.

A spectrum is stored as offsets + Z-span(lattice); offsets are always reduced
into a fundamental domain of the lattice so equal sets have equal descriptions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from classify import (
    DIFF_IN_2Z,
    DIFF_IN_Z,
    SUM_IN_2Z,
    SUM_IN_Z,
    NonSpectralError,
    NumericCross,
    TwoSegmentInput,
    classify_collinear,
    classify_cross,
    normalize_two_segments,
)
from measure import (
    AffineMap,
    LineDir,
    Measure,
    Point,
    SegmentPiece,
    SingularMapError,
    as_matrix,
    matrix_det,
    matrix_inverse,
)
from scalar import ExactScalar, InputError, as_scalar
from zeros import CrossConfig


class SubspaceError(ValueError):
    """A spectrum does not lie in the subspace its role requires."""


# ---------------------------------------------------------------------------
# Periodic sets on the line
# ---------------------------------------------------------------------------

def _reduce_mod(x: ExactScalar, period: ExactScalar) -> ExactScalar:
    return x - period * math.floor(x / period)


@dataclass(frozen=True)
class PeriodicSet1D:
    """offsets + period*Z, offsets in [0, period), repeats allowed."""

    offsets: tuple[ExactScalar, ...]
    period: ExactScalar

    def __post_init__(self) -> None:
        period = as_scalar(self.period)
        if period.sign() <= 0:
            raise ValueError(f"period must be positive, got {period}")
        offsets = tuple(sorted(_reduce_mod(as_scalar(o), period) for o in self.offsets))
        if not offsets:
            raise ValueError("a periodic set needs at least one offset")
        if offsets[0] != 0:
            raise ValueError("0 must be one of the offsets")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def of(cls, offsets: Iterable[Any], period: Any) -> PeriodicSet1D:
        return cls(tuple(as_scalar(o) for o in offsets), as_scalar(period))

    @property
    def count(self) -> int:
        return len(self.offsets)

    @property
    def density(self) -> ExactScalar:
        return ExactScalar(self.count) / self.period

    def has_multiplicity(self) -> bool:
        return len(set(self.offsets)) != len(self.offsets)

    def scaled(self, k: Any) -> PeriodicSet1D:
        k = as_scalar(k)
        if k.sign() <= 0:
            raise ValueError("scale factor must be positive")
        return PeriodicSet1D(tuple(o * k for o in self.offsets), self.period * k)

    def points_in_window(self, lo: float, hi: float) -> np.ndarray:
        p = self.period.to_float()
        pts = []
        for o in self.offsets:
            of = o.to_float()
            k = np.arange(math.floor((lo - of) / p) - 1, math.ceil((hi - of) / p) + 2)
            x = of + k * p
            pts.append(x[(x >= lo) & (x <= hi)])
        return np.sort(np.concatenate(pts))

    def to_spectrum(self) -> SpectrumSpec:
        if self.has_multiplicity():
            raise ValueError("a set with repeated offsets is not a spectrum")
        return SpectrumSpec(1, tuple(Point((o,)) for o in self.offsets), (Point((self.period,)),))

    def to_json(self) -> dict:
        return {"offsets": [o.to_json() for o in self.offsets], "period": self.period.to_json()}


# ---------------------------------------------------------------------------
# Spectra in R^d
# ---------------------------------------------------------------------------

def _gram(generators: Sequence[Point]) -> tuple[tuple[ExactScalar, ...], ...]:
    return tuple(tuple(g.dot(h) for h in generators) for g in generators)


@dataclass(frozen=True)
class SpectrumSpec:
    dimension: int
    offsets: tuple[Point, ...]
    lattice: tuple[Point, ...] = ()
    anchored: bool = True
    note: str = ""

    def __post_init__(self) -> None:
        offsets = tuple(self.offsets)
        lattice = tuple(self.lattice)
        if not offsets:
            raise ValueError("a spectrum needs at least one offset")
        for p in (*offsets, *lattice):
            if p.dim != self.dimension:
                raise ValueError(f"{p} is not {self.dimension}-dimensional")
        if len(lattice) > self.dimension:
            raise ValueError("lattice rank exceeds the dimension")
        if lattice and not matrix_det(as_matrix(_gram(lattice))):
            raise ValueError("lattice generators must be linearly independent")
        object.__setattr__(self, "lattice", lattice)
        reduced = tuple(sorted((self.reduce(p) for p in offsets), key=Point.sort_key))
        if len(set(reduced)) != len(reduced):
            raise ValueError("offsets must be distinct modulo the lattice")
        object.__setattr__(self, "offsets", reduced)
        if self.anchored and Point.zero(self.dimension) not in reduced:
            raise ValueError("a spectrum is normalized to contain the origin")

    # -- lattice arithmetic ---------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.lattice)

    def coefficients(self, p: Point) -> tuple[ExactScalar, ...]:
        """Coordinates of the lattice-span component of p in the generator basis."""
        if not self.lattice:
            return ()
        inv = matrix_inverse(as_matrix(_gram(self.lattice)))
        rhs = [p.dot(g) for g in self.lattice]
        return tuple(Point(row).dot(Point(tuple(rhs))) for row in inv)

    def reduce(self, p: Point) -> Point:
        for g, c in zip(self.lattice, self.coefficients(p)):
            p = p - g.scale(math.floor(c))
        return p

    def contains(self, p: Point) -> bool:
        return self.reduce(p) in self.offsets

    def translated(self, c: Point) -> SpectrumSpec:
        return SpectrumSpec(self.dimension, tuple(o + c for o in self.offsets), self.lattice, False, self.note)

    # -- enumeration ----------------------------------------------------

    def _float_data(self) -> tuple[np.ndarray, np.ndarray]:
        offs = np.array([o.to_floats() for o in self.offsets])
        gens = np.array([g.to_floats() for g in self.lattice]).reshape(self.rank, self.dimension)
        return offs, gens

    def coefficient_windows(self, center: np.ndarray, R: float) -> list[list[tuple[int, int]]]:
        """Per offset, integer ranges for each generator coefficient that can reach B(center, R)."""
        offs, gens = self._float_data()
        if not self.rank:
            return [[] for _ in self.offsets]
        P = np.linalg.inv(gens @ gens.T) @ gens
        spread = R * np.linalg.norm(P, axis=1)
        windows = []
        for o in offs:
            kc = P @ (center - o)
            windows.append([
                (math.floor(k - s) - 1, math.ceil(k + s) + 1) for k, s in zip(kc, spread)
            ])
        return windows

    def points_in_ball(self, center: Any, R: float, with_index: bool = False):
        """All points of the spectrum within distance R of center, offset by offset."""
        center = np.asarray(center.to_floats() if isinstance(center, Point) else center, dtype=float)
        center = center.reshape(self.dimension)
        offs, gens = self._float_data()
        r2 = R * R * (1 + 1e-12) + 1e-300
        blocks, owners = [], []
        for i, (o, window) in enumerate(zip(offs, self.coefficient_windows(center, R))):
            if self.rank:
                axes = [np.arange(lo, hi + 1) for lo, hi in window]
                ks = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.rank)
                pts = o + ks @ gens
            else:
                pts = o.reshape(1, -1)
            keep = ((pts - center) ** 2).sum(axis=1) <= r2
            blocks.append(pts[keep])
            owners.append(np.full(int(keep.sum()), i))
        points = np.concatenate(blocks) if blocks else np.zeros((0, self.dimension))
        if with_index:
            return points, np.concatenate(owners)
        return points

    def count_in_ball(self, center: Any, R: float) -> int:
        return len(self.points_in_ball(center, R))

    # -- structure checks -----------------------------------------------

    def has_multiplicity_one(self) -> bool:
        """No two distinct points share an x- or a y-coordinate (planar, rank <= 1)."""
        if self.dimension != 2 or self.rank > 1:
            raise ValueError("multiplicity check is implemented for planar spectra of rank <= 1")
        for axis in (0, 1):
            if self.rank == 1:
                g = self.lattice[0][axis]
                if not g:
                    return False
                for a, b in itertools.combinations(self.offsets, 2):
                    if ((a[axis] - b[axis]) / g).is_integer():
                        return False
            else:
                values = [o[axis] for o in self.offsets]
                if len(set(values)) != len(values):
                    return False
        return True

    def axis_projections(self) -> tuple[PeriodicSet1D, PeriodicSet1D]:
        """Lambda_x and Lambda_y as periodic multisets (rank-1 planar spectra)."""
        if self.dimension != 2 or self.rank != 1:
            raise ValueError("axis projections need a planar spectrum of rank 1")
        out = []
        for axis in (0, 1):
            period = abs(self.lattice[0][axis])
            if not period:
                raise ValueError("lattice generator is parallel to a coordinate axis")
            base = ExactScalar(0) if self.anchored else self.offsets[0][axis]
            out.append(PeriodicSet1D(tuple(o[axis] - base for o in self.offsets), period))
        return out[0], out[1]

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        data = {
            "dimension": self.dimension,
            "offsets": [o.to_json() for o in self.offsets],
            "lattice": [g.to_json() for g in self.lattice],
        }
        if self.note:
            data["note"] = self.note
        return data

    @classmethod
    def from_json(cls, data: dict) -> SpectrumSpec:
        if not isinstance(data, dict) or "offsets" not in data:
            raise InputError("spectrum JSON needs an 'offsets' list")
        offsets = tuple(Point.from_json(o) for o in data["offsets"])
        dimension = int(data.get("dimension", offsets[0].dim if offsets else 2))
        lattice = tuple(Point.from_json(g) for g in data.get("lattice", []))
        return cls(dimension, offsets, lattice, bool(data.get("anchored", True)), data.get("note", ""))


# ---------------------------------------------------------------------------
# Cross spectra
# ---------------------------------------------------------------------------

def cross_line_spectrum(c: CrossConfig) -> list[SpectrumSpec]:
    result = classify_cross(c)
    if not result.spectral:
        raise NonSpectralError(f"{c.label()} is not spectral")
    zero = Point.zero(2)
    specs = []
    for condition in result.matched_conditions:
        if condition == SUM_IN_Z:
            alpha = ExactScalar(1) / (2 * (c.t1 + c.t2 + 1))
            specs.append(SpectrumSpec(
                2, (zero, Point.of(alpha, -alpha)), (Point.of(1, -1),),
                note=f"line y=-x, alpha={alpha}",
            ))
        elif condition == DIFF_IN_Z:
            alpha = ExactScalar(1) / (2 * (c.t1 - c.t2))
            specs.append(SpectrumSpec(
                2, (zero, Point.of(alpha, alpha)), (Point.of(1, 1),),
                note=f"line y=x, alpha={alpha}",
            ))
        elif condition == SUM_IN_2Z:
            half = ExactScalar(1) / 2
            specs.append(SpectrumSpec(2, (zero,), (Point.of(half, -half),), note="line y=-x, (1/2)Z"))
        elif condition == DIFF_IN_2Z:
            half = ExactScalar(1) / 2
            specs.append(SpectrumSpec(2, (zero,), (Point.of(half, half),), note="line y=x, (1/2)Z"))
    return specs


# ---------------------------------------------------------------------------
# Two intervals on a line, parallel pairs
# ---------------------------------------------------------------------------

def two_interval_spectrum_1d(len1: Any, len2: Any, gap: Any) -> PeriodicSet1D:
    """Spectrum of Lebesgue measure on two intervals; lengths need not be normalized."""
    result = classify_collinear(len1, len2, gap)
    if not result.spectral:
        raise NonSpectralError(
            f"intervals of lengths {len1}, {len2} with gap {gap} are not spectral"
        )
    data = result.normalized
    if data.len1 == data.len2:
        n = data.gap
        spectrum = PeriodicSet1D((ExactScalar(0), ExactScalar(1) / (2 * (n + 1))), ExactScalar(1))
    else:
        spectrum = PeriodicSet1D((ExactScalar(0),), ExactScalar(1) / 2)
    return spectrum if data.scale == 1 else spectrum.scaled(data.scale)


def _check_parallel(seg1: SegmentPiece, seg2: SegmentPiece) -> None:
    if not seg1.direction.is_parallel_to(seg2.direction):
        raise ValueError("segments are not parallel")
    if seg1.direction.is_parallel_to(seg2.start - seg1.start):
        raise ValueError("segments are collinear; no projection line separates them")


def choose_projection_line(seg1: SegmentPiece, seg2: SegmentPiece, k: int) -> LineDir:
    """Line onto which the pair projects injectively with gap = k * (sum of projected lengths).

    k = 0 gives the single-interval projection: the shadows touch end to end.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    _check_parallel(seg1, seg2)
    d = seg1.direction
    a2 = abs(seg2.direction.dot(d)) / d.norm2()
    mean_length = (1 + a2) / 2
    w = seg2.midpoint - seg1.midpoint
    v = (w - d.scale((2 * k + 1) * mean_length)).perp()
    first = next(c for c in v if c)
    return LineDir(v if first.sign() > 0 else -v)


def single_interval_line(seg1: SegmentPiece, seg2: SegmentPiece) -> LineDir:
    return choose_projection_line(seg1, seg2, 0)


def _shadow(seg: SegmentPiece, L: LineDir) -> tuple[ExactScalar, ExactScalar]:
    a, b = L.coordinate(seg.start), L.coordinate(seg.end)
    return min(a, b), max(a, b)


def _two_interval_lift(seg1: SegmentPiece, seg2: SegmentPiece, L: LineDir, note: str) -> SpectrumSpec:
    (lo1, hi1), (lo2, hi2) = _shadow(seg1, L), _shadow(seg2, L)
    gap = max(lo1, lo2) - min(hi1, hi2)
    if gap.sign() < 0:
        raise ValueError("projection onto the chosen line is not injective")
    spectrum = lift_1d_spectrum(two_interval_spectrum_1d(hi1 - lo1, hi2 - lo2, gap), L)
    return SpectrumSpec(spectrum.dimension, spectrum.offsets, spectrum.lattice, note=note)


def parallel_spectrum(seg1: SegmentPiece, seg2: SegmentPiece, k: int) -> SpectrumSpec:
    L = choose_projection_line(seg1, seg2, k)
    return _two_interval_lift(seg1, seg2, L, f"projection onto {L.direction}, k={k}")


def lift_1d_spectrum(s: PeriodicSet1D, L: LineDir) -> SpectrumSpec:
    """Place a 1D spectrum (in the line's coordinates <p, v>/n) along L."""
    if s.has_multiplicity():
        raise ValueError("cannot lift a periodic set with repeated offsets")
    return SpectrumSpec(
        L.direction.dim,
        tuple(L.lift(o) for o in s.offsets),
        (L.lift(s.period),),
    )


# ---------------------------------------------------------------------------
# Sumsets, atoms, affine pullback
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrthogonalSplit:
    """R^d = V + V-perp with V spanned by the first k rows of an orthogonal basis."""

    basis: tuple[Point, ...]
    k: int

    def __post_init__(self) -> None:
        basis = tuple(self.basis)
        d = len(basis)
        if any(b.dim != d or b.is_zero() for b in basis):
            raise ValueError("basis must consist of d nonzero vectors in R^d")
        for a, b in itertools.combinations(basis, 2):
            if a.dot(b):
                raise ValueError(f"basis vectors {a} and {b} are not orthogonal")
        if not 0 <= self.k <= d:
            raise ValueError("k must lie between 0 and d")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def coordinate(cls, d: int, k: int) -> OrthogonalSplit:
        rows = tuple(Point(tuple(int(i == j) for j in range(d))) for i in range(d))
        return cls(rows, k)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def in_V(self, p: Point) -> bool:
        return all(not p.dot(b) for b in self.basis[self.k:])

    def in_V_perp(self, p: Point) -> bool:
        return all(not p.dot(b) for b in self.basis[: self.k])

    def describe(self) -> str:
        return f"V=span{[str(b) for b in self.basis[: self.k]]}"

    def to_json(self) -> dict:
        return {"basis": [b.to_json() for b in self.basis], "k": self.k}


def validate_sumset_support(nu: Measure, split: OrthogonalSplit) -> None:
    """nu must live on a translate of V-perp."""
    points = nu.support_points()
    base = points[0]
    for p in points[1:]:
        if not split.in_V_perp(p - base):
            raise SubspaceError(f"support point {p} leaves the translate of V-perp through {base}")


def sumset_spectrum(
    L: SpectrumSpec,
    M: SpectrumSpec,
    split: OrthogonalSplit | None = None,
    nu: Measure | None = None,
) -> SpectrumSpec:
    """L + M for mu1 * nu1, with L in V and M in V-perp."""
    if L.dimension != M.dimension:
        raise ValueError("spectra live in different dimensions")
    split = split or OrthogonalSplit.coordinate(L.dimension, 1)
    if split.dimension != L.dimension:
        raise ValueError("split dimension does not match the spectra")
    for p in (*L.offsets, *L.lattice):
        if not split.in_V(p):
            raise SubspaceError(f"{p} of the first spectrum is not in V ({split.describe()})")
    for p in (*M.offsets, *M.lattice):
        if not split.in_V_perp(p):
            raise SubspaceError(f"{p} of the second spectrum is not in V-perp ({split.describe()})")
    if nu is not None:
        validate_sumset_support(nu, split)
    offsets = tuple(a + b for a in L.offsets for b in M.offsets)
    note = f"sumset over {split.describe()}"
    return SpectrumSpec(L.dimension, offsets, L.lattice + M.lattice, note=note)


def equal_spaced_atoms_spectrum(n: int, h: Any, axis: LineDir) -> SpectrumSpec:
    """Spectrum of n equal atoms spaced h apart along `axis` (spacing in the axis coordinate)."""
    if n < 1:
        raise ValueError("need at least one atom")
    h = as_scalar(h)
    if not h:
        raise ValueError("spacing must be nonzero")
    offsets = tuple(axis.lift(ExactScalar(j) / (n * h)) for j in range(n))
    return SpectrumSpec(axis.direction.dim, offsets, (), note=f"{n} atoms along {axis.direction}")


def pullback_spectrum_affine(s: SpectrumSpec, A: AffineMap | Any) -> SpectrumSpec:
    """Spectrum of mu from a spectrum of T#mu, T(x) = Ax + b."""
    T = A if isinstance(A, AffineMap) else AffineMap.linear(A)
    if T.dim != s.dimension:
        raise ValueError("map dimension does not match the spectrum")
    if not T.det():
        raise SingularMapError("affine map is singular")
    return SpectrumSpec(
        s.dimension,
        tuple(T.apply_transpose(o) for o in s.offsets),
        tuple(T.apply_transpose(g) for g in s.lattice),
        s.anchored,
        s.note,
    )


# ---------------------------------------------------------------------------
# Everything constructible for a two-segment input
# ---------------------------------------------------------------------------

def two_segment_spectra(inp: TwoSegmentInput, ks: Sequence[int] = (1, 2, 3)) -> list[SpectrumSpec]:
    norm = normalize_two_segments(inp)
    if norm.geometry == "nonparallel":
        if isinstance(norm.data, NumericCross):
            return []
        config = norm.data
        specs = cross_line_spectrum(config)
        return [pullback_spectrum_affine(s, AffineMap.linear(config.provenance.matrix)) for s in specs]
    if norm.geometry == "parallel":
        return [parallel_spectrum(inp.seg1, inp.seg2, k) for k in ks]
    L = LineDir(inp.seg1.direction)
    return [_two_interval_lift(inp.seg1, inp.seg2, L, f"collinear along {L.direction}")]
