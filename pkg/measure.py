#!/usr/bin/env python3
"""
Measures built from point masses and uniformly weighted line segments.

Coordinates and masses are exact (Q[sqrt2]); Fourier transforms are evaluated
in floating point with the closed form

    (mass) * exp(-pi i xi.(p+q)) * sinc(xi.(q-p))

for a segment from p to q, which is exact at the integer zeros of sinc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from scalar import ExactScalar, InputError, as_scalar, sqrt_exact

SINC_TAYLOR_CUTOFF = 1e-8


class OverlapError(ValueError):
    """Two segments share a piece of positive length."""


class SingularMapError(ValueError):
    """An affine map with zero determinant was used where an invertible one is needed."""


class UnsupportedOperationError(ValueError):
    """The result would leave the class of atom + segment measures."""


# ---------------------------------------------------------------------------
# Points and affine maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    coords: tuple[ExactScalar, ...]

    def __post_init__(self) -> None:
        coords = tuple(as_scalar(c) for c in self.coords)
        if not coords:
            raise ValueError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *values: Any) -> Point:
        return cls(tuple(values))

    @classmethod
    def zero(cls, dim: int) -> Point:
        return cls((0,) * dim)

    @classmethod
    def from_json(cls, data: Any) -> Point:
        if not isinstance(data, (list, tuple)):
            raise InputError(f"a point must be a list of scalars, got {data!r}")
        return cls(tuple(ExactScalar.parse(v) for v in data))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> ExactScalar:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)

    def _check(self, other: Point) -> None:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: Point) -> Point:
        self._check(other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: Point) -> Point:
        self._check(other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> Point:
        return Point(tuple(-a for a in self.coords))

    def scale(self, k: Any) -> Point:
        k = as_scalar(k)
        return Point(tuple(k * a for a in self.coords))

    def __mul__(self, k: Any) -> Point:
        return self.scale(k)

    __rmul__ = __mul__

    def dot(self, other: Point) -> ExactScalar:
        self._check(other)
        total = ExactScalar(0)
        for a, b in zip(self.coords, other.coords):
            total = total + a * b
        return total

    def norm2(self) -> ExactScalar:
        return self.dot(self)

    def cross(self, other: Point) -> ExactScalar:
        """z-component of the planar cross product."""
        if self.dim != 2 or other.dim != 2:
            raise ValueError("cross product needs planar points")
        return self[0] * other[1] - self[1] * other[0]

    def perp(self) -> Point:
        """Rotation by -90 degrees: (x, y) -> (y, -x)."""
        if self.dim != 2:
            raise ValueError("perpendicular needs a planar point")
        return Point((self[1], -self[0]))

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def is_parallel_to(self, other: Point) -> bool:
        self._check(other)
        n = self.dim
        return all(
            not (self[i] * other[j] - self[j] * other[i])
            for i in range(n) for j in range(i + 1, n)
        )

    def to_floats(self) -> np.ndarray:
        return np.array([c.to_float() for c in self.coords], dtype=float)

    def sort_key(self) -> tuple:
        return tuple((c.to_float(), c.rat, c.sq2) for c in self.coords)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


Matrix = tuple[tuple[ExactScalar, ...], ...]


def as_matrix(rows: Any) -> Matrix:
    matrix = tuple(tuple(as_scalar(v) for v in row) for row in rows)
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise ValueError("matrix must be square and non-empty")
    return matrix


def matrix_inverse(matrix: Matrix) -> Matrix:
    """Gauss-Jordan elimination over Q[sqrt2]."""
    n = len(matrix)
    work = [list(row) + [ExactScalar(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise SingularMapError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [v * inv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def matrix_det(matrix: Matrix) -> ExactScalar:
    n = len(matrix)
    work = [list(row) for row in matrix]
    det = ExactScalar(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            return ExactScalar(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col]
        inv = work[col][col].inverse()
        for r in range(col + 1, n):
            if work[r][col]:
                factor = work[r][col] * inv
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return det


def matrix_apply(matrix: Matrix, p: Point) -> Point:
    if len(matrix) != p.dim:
        raise ValueError(f"dimension mismatch: {len(matrix)} vs {p.dim}")
    return Point(tuple(Point(row).dot(p) for row in matrix))


def matrix_transpose(matrix: Matrix) -> Matrix:
    return tuple(zip(*matrix))


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b."""

    matrix: Matrix
    shift: Point

    def __post_init__(self) -> None:
        matrix = as_matrix(self.matrix)
        if len(matrix) != self.shift.dim:
            raise ValueError("matrix and shift dimensions differ")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def linear(cls, rows: Any) -> AffineMap:
        matrix = as_matrix(rows)
        return cls(matrix, Point.zero(len(matrix)))

    @classmethod
    def identity(cls, dim: int) -> AffineMap:
        return cls.linear([[int(i == j) for j in range(dim)] for i in range(dim)])

    @classmethod
    def translation(cls, b: Point) -> AffineMap:
        return cls(cls.identity(b.dim).matrix, b)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def det(self) -> ExactScalar:
        return matrix_det(self.matrix)

    def apply(self, p: Point) -> Point:
        return matrix_apply(self.matrix, p) + self.shift

    def apply_linear(self, p: Point) -> Point:
        return matrix_apply(self.matrix, p)

    def apply_transpose(self, p: Point) -> Point:
        return matrix_apply(matrix_transpose(self.matrix), p)

    def inverse(self) -> AffineMap:
        inv = matrix_inverse(self.matrix)
        return AffineMap(inv, -matrix_apply(inv, self.shift))

    def compose(self, inner: AffineMap) -> AffineMap:
        """self after inner."""
        rows = tuple(
            tuple(
                Point(self.matrix[i]).dot(Point(tuple(inner.matrix[k][j] for k in range(self.dim))))
                for j in range(self.dim)
            )
            for i in range(self.dim)
        )
        return AffineMap(rows, self.apply(inner.shift))

    def to_json(self) -> dict:
        return {
            "matrix": [[v.to_json() for v in row] for row in self.matrix],
            "shift": self.shift.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> AffineMap:
        matrix = as_matrix([[ExactScalar.parse(v) for v in row] for row in data["matrix"]])
        shift = Point.from_json(data.get("shift", [0] * len(matrix)))
        return cls(matrix, shift)


# ---------------------------------------------------------------------------
# Measure pieces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomPiece:
    at: Point
    mass: ExactScalar

    def __post_init__(self) -> None:
        mass = as_scalar(self.mass)
        if mass.sign() <= 0:
            raise ValueError(f"atom mass must be positive, got {mass}")
        object.__setattr__(self, "mass", mass)

    def to_json(self) -> dict:
        return {"at": self.at.to_json(), "mass": self.mass.to_json()}


@dataclass(frozen=True)
class SegmentPiece:
    """Uniform mass on the closed segment start--end."""

    start: Point
    end: Point
    mass: ExactScalar

    def __post_init__(self) -> None:
        mass = as_scalar(self.mass)
        if mass.sign() <= 0:
            raise ValueError(f"segment mass must be positive, got {mass}")
        if self.start.dim != self.end.dim:
            raise ValueError("segment endpoints differ in dimension")
        if self.start == self.end:
            raise ValueError(f"zero-length segment at {self.start}")
        object.__setattr__(self, "mass", mass)

    @property
    def dim(self) -> int:
        return self.start.dim

    @property
    def direction(self) -> Point:
        return self.end - self.start

    @property
    def midpoint(self) -> Point:
        return (self.start + self.end).scale(ExactScalar(1, 0) / 2)

    def length_exact(self) -> ExactScalar | None:
        return sqrt_exact(self.direction.norm2())

    def length(self) -> float:
        return math.sqrt(self.direction.norm2().to_float())

    def density(self) -> float:
        return self.mass.to_float() / self.length()

    def reversed(self) -> SegmentPiece:
        return SegmentPiece(self.end, self.start, self.mass)

    def to_json(self) -> dict:
        return {"from": self.start.to_json(), "to": self.end.to_json(), "mass": self.mass.to_json()}


def segments_overlap(a: SegmentPiece, b: SegmentPiece) -> bool:
    """True when the segments share a piece of positive length."""
    d = a.direction
    if not d.is_parallel_to(b.direction) or not d.is_parallel_to(b.start - a.start):
        return False
    dd = d.norm2()
    ta = (b.start - a.start).dot(d) / dd
    tb = (b.end - a.start).dot(d) / dd
    lo = max(ExactScalar(0), min(ta, tb))
    hi = min(ExactScalar(1), max(ta, tb))
    return lo < hi


@dataclass(frozen=True)
class Measure:
    atoms: tuple[AtomPiece, ...] = ()
    segments: tuple[SegmentPiece, ...] = ()
    dimension: int = 2

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        segments = tuple(self.segments)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "segments", segments)
        if not atoms and not segments:
            raise ValueError("a measure needs at least one atom or segment")
        for piece in atoms:
            if piece.at.dim != self.dimension:
                raise ValueError(f"atom {piece.at} is not {self.dimension}-dimensional")
        for piece in segments:
            if piece.dim != self.dimension:
                raise ValueError(f"segment {piece.start}--{piece.end} is not {self.dimension}-dimensional")
        for i, a in enumerate(segments):
            for b in segments[i + 1:]:
                if segments_overlap(a, b):
                    raise OverlapError(
                        f"segments {a.start}--{a.end} and {b.start}--{b.end} overlap in positive length"
                    )

    @property
    def total_mass(self) -> ExactScalar:
        total = ExactScalar(0)
        for piece in (*self.atoms, *self.segments):
            total = total + piece.mass
        return total

    def is_atomic(self) -> bool:
        return not self.segments

    def scaled(self, k: Any) -> Measure:
        k = as_scalar(k)
        return Measure(
            tuple(AtomPiece(a.at, a.mass * k) for a in self.atoms),
            tuple(SegmentPiece(s.start, s.end, s.mass * k) for s in self.segments),
            self.dimension,
        )

    def normalized(self) -> tuple[Measure, ExactScalar]:
        """Probability version of the measure and the factor that was applied."""
        factor = self.total_mass.inverse()
        if factor == 1:
            return self, factor
        return self.scaled(factor), factor

    def translated(self, b: Point) -> Measure:
        return affine_pushforward(self, AffineMap.translation(b))

    def support_points(self) -> list[Point]:
        points = [a.at for a in self.atoms]
        for s in self.segments:
            points.extend((s.start, s.end))
        return points

    def diameter(self) -> float:
        pts = np.array([p.to_floats() for p in self.support_points()])
        if len(pts) < 2:
            return 0.0
        diffs = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diffs ** 2).sum(axis=-1)).max())

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "atoms": [a.to_json() for a in self.atoms],
            "segments": [s.to_json() for s in self.segments],
        }

    @classmethod
    def from_json(cls, data: dict) -> Measure:
        if not isinstance(data, dict):
            raise InputError("measure JSON must be an object")
        dimension = int(data.get("dimension", 2))
        atoms = []
        for item in data.get("atoms", []):
            atoms.append(AtomPiece(Point.from_json(item["at"]), ExactScalar.parse(item.get("mass", 1))))
        segments = []
        for item in data.get("segments", []):
            start, end = Point.from_json(item["from"]), Point.from_json(item["to"])
            if "mass" in item:
                mass = ExactScalar.parse(item["mass"])
            else:
                mass = sqrt_exact((end - start).norm2())
                if mass is None:
                    raise InputError(
                        f"segment {start}--{end}: length is not in Q[sqrt2], give its mass explicitly"
                    )
            segments.append(SegmentPiece(start, end, mass))
        return cls(tuple(atoms), tuple(segments), dimension)


def arc_length_measure(
    endpoints: Iterable[tuple[Point, Point]], normalize: bool = False, density: Any = 1
) -> Measure:
    """Equal-density measure on the given segments; lengths must lie in Q[sqrt2]."""
    density = as_scalar(density)
    segments = []
    for start, end in endpoints:
        length = sqrt_exact((end - start).norm2())
        if length is None:
            raise ValueError(f"length of {start}--{end} is not in Q[sqrt2]")
        segments.append(SegmentPiece(start, end, length * density))
    m = Measure((), tuple(segments), segments[0].dim if segments else 2)
    return m.normalized()[0] if normalize else m


# ---------------------------------------------------------------------------
# Fourier transform
# ---------------------------------------------------------------------------

def _sinc(x: np.ndarray) -> np.ndarray:
    small = np.abs(x) < SINC_TAYLOR_CUTOFF
    return np.where(small, 1.0 - (np.pi * x) ** 2 / 6.0, np.sinc(x))


def _frequency_array(dimension: int, xi: Any) -> np.ndarray:
    if isinstance(xi, Point):
        xi = xi.to_floats()
    arr = np.asarray(xi, dtype=float)
    if dimension == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr[..., None]
    if arr.ndim == 0 or arr.shape[-1] != dimension:
        raise ValueError(f"frequency dimension does not match measure dimension {dimension}")
    return arr


def fourier_eval(m: Measure, xi: Any) -> complex | np.ndarray:
    """mu-hat(xi) = integral of exp(-2 pi i xi.x) dmu(x); xi may be a batch of shape (..., d)."""
    arr = _frequency_array(m.dimension, xi)
    result = np.zeros(arr.shape[:-1], dtype=complex)
    for atom in m.atoms:
        result += atom.mass.to_float() * np.exp(-2j * np.pi * (arr @ atom.at.to_floats()))
    for seg in m.segments:
        p, q = seg.start.to_floats(), seg.end.to_floats()
        phase = arr @ (p + q)
        arg = arr @ (q - p)
        result += seg.mass.to_float() * np.exp(-1j * np.pi * phase) * _sinc(arg)
    if result.ndim == 0:
        return complex(result)
    return result


# ---------------------------------------------------------------------------
# Affine maps, convolution
# ---------------------------------------------------------------------------

def affine_pushforward(m: Measure, A: AffineMap | Any, b: Point | Any = None) -> Measure:
    """Image of m under x -> Ax + b; a shift b given with an AffineMap is added to the map's own shift."""
    T = A if isinstance(A, AffineMap) else AffineMap.linear(A)
    if T.dim != m.dimension:
        raise ValueError("map dimension does not match the measure")
    if b is not None:
        shift = b if isinstance(b, Point) else Point.of(*b)
        if shift.dim != T.dim:
            raise ValueError("shift dimension does not match the map")
        T = AffineMap.translation(shift).compose(T)
    if not T.det():
        raise SingularMapError("affine map is singular")
    return Measure(
        tuple(AtomPiece(T.apply(a.at), a.mass) for a in m.atoms),
        tuple(SegmentPiece(T.apply(s.start), T.apply(s.end), s.mass) for s in m.segments),
        m.dimension,
    )


def _merge_pieces(atoms: Sequence[AtomPiece], segments: Sequence[SegmentPiece], dimension: int) -> Measure:
    atom_mass: dict[Point, ExactScalar] = {}
    for a in atoms:
        atom_mass[a.at] = atom_mass.get(a.at, ExactScalar(0)) + a.mass
    seg_mass: dict[tuple[Point, Point], ExactScalar] = {}
    for s in segments:
        key = (s.start, s.end) if (s.end, s.start) not in seg_mass else (s.end, s.start)
        seg_mass[key] = seg_mass.get(key, ExactScalar(0)) + s.mass
    return Measure(
        tuple(AtomPiece(p, w) for p, w in atom_mass.items()),
        tuple(SegmentPiece(p, q, w) for (p, q), w in seg_mass.items()),
        dimension,
    )


def convolve(m1: Measure, m2: Measure) -> Measure:
    """Convolution where at least one factor is purely atomic."""
    if m1.dimension != m2.dimension:
        raise ValueError("cannot convolve measures of different dimension")
    if m1.segments and m2.segments:
        raise UnsupportedOperationError("segment * segment convolution leaves the segment-measure class")
    atoms = [AtomPiece(a.at + b.at, a.mass * b.mass) for a in m1.atoms for b in m2.atoms]
    pairs = [(a, s) for a in m1.atoms for s in m2.segments] + [(a, s) for a in m2.atoms for s in m1.segments]
    segments = [SegmentPiece(s.start + a.at, s.end + a.at, s.mass * a.mass) for a, s in pairs]
    return _merge_pieces(atoms, segments, m1.dimension)


# ---------------------------------------------------------------------------
# Projection onto a line through the origin
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineDir:
    """Line through the origin spanned by `direction`."""

    direction: Point

    def __post_init__(self) -> None:
        if self.direction.is_zero():
            raise ValueError("line direction must be nonzero")

    @classmethod
    def of(cls, *values: Any) -> LineDir:
        return cls(Point.of(*values))

    @property
    def exact_norm(self) -> ExactScalar | None:
        return sqrt_exact(self.direction.norm2())

    @property
    def exact_unit(self) -> bool:
        return self.exact_norm is not None

    @property
    def coordinate_norm(self) -> ExactScalar:
        """n in the coordinate convention s = <p, v> / n."""
        n = self.exact_norm
        return n if n is not None else ExactScalar(1)

    @property
    def scale(self) -> float:
        """|v| / n; true distances along the line are s / scale."""
        return math.sqrt(self.direction.norm2().to_float()) / self.coordinate_norm.to_float()

    def coordinate(self, p: Point) -> ExactScalar:
        return p.dot(self.direction) / self.coordinate_norm

    def lift(self, t: Any) -> Point:
        """Point of the line with coordinate t."""
        return self.direction.scale(as_scalar(t) / self.coordinate_norm)

    def unit_floats(self) -> np.ndarray:
        v = self.direction.to_floats()
        return v / np.linalg.norm(v)

    def to_json(self) -> dict:
        return {"direction": self.direction.to_json(), "exact_unit": self.exact_unit}


@dataclass(frozen=True)
class CoveredInterval:
    lo: ExactScalar
    hi: ExactScalar
    sources: tuple[str, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.sources)


@dataclass(frozen=True)
class MultiplicityMap:
    """Which source pieces cover each elementary projected interval or point."""

    intervals: tuple[CoveredInterval, ...] = ()
    points: tuple[tuple[ExactScalar, tuple[str, ...]], ...] = ()

    def max_multiplicity(self) -> int:
        best = max((c.multiplicity for c in self.intervals), default=0)
        return max(best, max((len(src) for _, src in self.points), default=0))

    def interval_multiplicity(self) -> int:
        return max((c.multiplicity for c in self.intervals), default=0)

    def multiplicity_at(self, s: Any) -> int:
        s = as_scalar(s)
        return sum(c.multiplicity for c in self.intervals if c.lo < s < c.hi)

    def to_json(self) -> dict:
        return {
            "intervals": [
                {"lo": c.lo.to_json(), "hi": c.hi.to_json(), "sources": list(c.sources)}
                for c in self.intervals
            ],
            "points": [{"at": at.to_json(), "sources": list(src)} for at, src in self.points],
            "max_multiplicity": self.max_multiplicity(),
        }


@dataclass(frozen=True)
class Projection:
    """Projected 1D measure in coordinates s = <p, v> / n, plus its multiplicity map."""

    measure: Measure
    multiplicity: MultiplicityMap
    line: LineDir
    pieces: tuple[tuple[ExactScalar, ExactScalar, str], ...] = field(default=())

    @property
    def exact_unit(self) -> bool:
        return self.line.exact_unit

    @property
    def scale(self) -> float:
        return self.line.scale

    def fourier(self, t: Any) -> complex | np.ndarray:
        """Fourier transform of the projection in true arc-length coordinates."""
        return fourier_eval(self.measure, np.asarray(t, dtype=float) / self.scale)

    def injective(self) -> bool:
        """Injective up to a null set: no shared shadow, no collapsed segment, no stacked atoms."""
        if self.multiplicity.interval_multiplicity() > 1:
            return False
        for _, sources in self.multiplicity.points:
            if len(sources) > 1 or any(src.startswith("s") for src in sources):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "line": self.line.to_json(),
            "scale": self.scale,
            "measure": self.measure.to_json(),
            "multiplicity": self.multiplicity.to_json(),
        }


def project_to_line(m: Measure, L: LineDir) -> Projection:
    if L.direction.dim != m.dimension:
        raise ValueError("line and measure dimensions differ")
    shadows: list[tuple[ExactScalar, ExactScalar, ExactScalar, str]] = []
    point_sources: dict[ExactScalar, list[str]] = {}
    point_mass: dict[ExactScalar, ExactScalar] = {}

    def add_point(at: ExactScalar, mass: ExactScalar, source: str) -> None:
        point_sources.setdefault(at, []).append(source)
        point_mass[at] = point_mass.get(at, ExactScalar(0)) + mass

    for i, seg in enumerate(m.segments):
        a, b = L.coordinate(seg.start), L.coordinate(seg.end)
        if a == b:
            add_point(a, seg.mass, f"s{i}")
        else:
            shadows.append((min(a, b), max(a, b), seg.mass, f"s{i}"))
    for j, atom in enumerate(m.atoms):
        add_point(L.coordinate(atom.at), atom.mass, f"a{j}")

    breaks = sorted({x for lo, hi, _, _ in shadows for x in (lo, hi)})
    intervals = []
    segments = []
    for x, y in zip(breaks, breaks[1:]):
        covering = [(lo, hi, w, src) for lo, hi, w, src in shadows if lo <= x and y <= hi]
        if not covering:
            continue
        mass = ExactScalar(0)
        for lo, hi, w, _ in covering:
            mass = mass + w * (y - x) / (hi - lo)
        segments.append(SegmentPiece(Point((x,)), Point((y,)), mass))
        intervals.append(CoveredInterval(x, y, tuple(src for *_, src in covering)))

    atoms = tuple(AtomPiece(Point((at,)), point_mass[at]) for at in sorted(point_mass))
    points = tuple((at, tuple(point_sources[at])) for at in sorted(point_sources))
    projected = Measure(atoms, tuple(segments), 1)
    pieces = tuple((lo, hi, src) for lo, hi, _, src in shadows)
    return Projection(projected, MultiplicityMap(tuple(intervals), points), L, pieces)
