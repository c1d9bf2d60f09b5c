#!/usr/bin/env python3
"""
Spectrality of the equal-density arc-length measure on two line segments.

Every pair is first normalized:
- non-parallel pairs are mapped to the cross [t1, t1+T1] x {0} U {0} x [t2, t2+T2]
  with T1 + T2 = 2 (supporting lines become the axes, lengths preserved, then scaled);
- parallel and collinear pairs are described by lengths, gap and perpendicular
  displacement measured along the common direction, scaled so the lengths sum to 2.

The decision itself is an integrality test on the normalized parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple

from config import NUMERIC_INTEGER_TOL
from measure import AffineMap, Measure, OverlapError, Point, SegmentPiece, segments_overlap
from scalar import ExactScalar, as_scalar, sqrt_exact
from zeros import CrossConfig

SUM_IN_Z = "t1+t2 in Z\\{-1}"
DIFF_IN_Z = "t1-t2 in Z\\{0}"
SUM_IN_2Z = "t1+t2 in 2Z"
DIFF_IN_2Z = "t1-t2-T2 in 2Z"
GAP_IN_Z = "gap in Z"
GAP_IN_2Z = "gap in 2Z"
PARALLEL = "parallel non-collinear"

EXACT = "exact"
NUMERIC_FLAGGED = "numeric-flagged"


class NonSpectralError(ValueError):
    """A construction was requested for a configuration that is not spectral."""


@dataclass(frozen=True)
class TwoSegmentInput:
    seg1: SegmentPiece
    seg2: SegmentPiece
    check_density: bool = True

    def __post_init__(self) -> None:
        if self.seg1.dim != 2 or self.seg2.dim != 2:
            raise ValueError("two-segment classification works in the plane")
        if segments_overlap(self.seg1, self.seg2):
            raise OverlapError("the two segments overlap in positive length")
        if self.check_density:
            # m1 / |d1| == m2 / |d2|, squared to stay in Q[sqrt2]
            lhs = self.seg1.mass * self.seg1.mass * self.seg2.direction.norm2()
            rhs = self.seg2.mass * self.seg2.mass * self.seg1.direction.norm2()
            if lhs != rhs:
                raise ValueError("segments must carry equal density (mass proportional to length)")

    @classmethod
    def from_endpoints(cls, p1: Point, q1: Point, p2: Point, q2: Point) -> TwoSegmentInput:
        l1, l2 = sqrt_exact((q1 - p1).norm2()), sqrt_exact((q2 - p2).norm2())
        if l1 is not None and l2 is not None:
            return cls(SegmentPiece(p1, q1, l1), SegmentPiece(p2, q2, l2))
        return cls(SegmentPiece(p1, q1, 1), SegmentPiece(p2, q2, 1), check_density=False)

    @classmethod
    def from_measure(cls, m: Measure) -> TwoSegmentInput:
        if m.atoms or len(m.segments) != 2 or m.dimension != 2:
            raise ValueError("expected a planar measure with exactly two segments and no atoms")
        return cls(m.segments[0], m.segments[1])

    def measure(self) -> Measure:
        return Measure((), (self.seg1, self.seg2), 2)


class NumericCross(NamedTuple):
    """Cross parameters that left Q[sqrt2]; decisions on them are tolerance based."""

    t1: float
    t2: float
    T1: float
    T2: float

    def to_json(self) -> dict:
        return {"t1": self.t1, "t2": self.t2, "T1": self.T1, "T2": self.T2}


@dataclass(frozen=True)
class LineGapData:
    """Collinear / parallel pair in units along the common direction, scaled to total length 2."""

    len1: ExactScalar
    len2: ExactScalar
    gap: ExactScalar
    start1: ExactScalar
    start2: ExactScalar
    displacement: ExactScalar
    scale: ExactScalar
    direction: Point

    def to_json(self) -> dict:
        return {
            "lengths": [self.len1.to_json(), self.len2.to_json()],
            "gap": self.gap.to_json(),
            "starts": [self.start1.to_json(), self.start2.to_json()],
            "displacement": self.displacement.to_json(),
            "scale": self.scale.to_json(),
            "direction": self.direction.to_json(),
        }


class NormalizedPair(NamedTuple):
    geometry: str        # collinear | parallel | nonparallel
    data: CrossConfig | NumericCross | LineGapData
    exactness: str


@dataclass(frozen=True)
class ClassificationResult:
    geometry: str
    spectral: bool
    matched_conditions: tuple[str, ...]
    normalized: CrossConfig | NumericCross | LineGapData | None
    exactness: str = EXACT

    def __post_init__(self) -> None:
        if self.spectral and not self.matched_conditions:
            raise ValueError("a spectral verdict must name the condition that holds")

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry,
            "spectral": self.spectral,
            "matched_conditions": list(self.matched_conditions),
            "normalized": self.normalized.to_json() if self.normalized is not None else None,
            "exactness": self.exactness,
        }


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def _line_gap_data(seg1: SegmentPiece, seg2: SegmentPiece) -> LineGapData:
    d = seg1.direction
    dd = d.norm2()

    def along(p: Point) -> ExactScalar:
        return (p - seg1.start).dot(d) / dd

    a2, b2 = along(seg2.start), along(seg2.end)
    lo2, hi2 = min(a2, b2), max(a2, b2)
    len1, len2 = ExactScalar(1), hi2 - lo2
    sigma = 2 / (len1 + len2)
    gap = max(ExactScalar(0), lo2) - min(len1, hi2)
    displacement = d.cross(seg2.start - seg1.start) / dd
    return LineGapData(
        len1 * sigma, len2 * sigma, gap * sigma, ExactScalar(0), lo2 * sigma,
        displacement * sigma, sigma, d,
    )


def normalize_two_segments(inp: TwoSegmentInput) -> NormalizedPair:
    seg1, seg2 = inp.seg1, inp.seg2
    d1, d2 = seg1.direction, seg2.direction
    denom = d1.cross(d2)
    if not denom:
        data = _line_gap_data(seg1, seg2)
        geometry = "collinear" if not data.displacement else "parallel"
        return NormalizedPair(geometry, data, EXACT)

    # intersection O = p1 + a d1 = p2 + b d2 of the supporting lines
    w = seg2.start - seg1.start
    a = w.cross(d2) / denom
    b = w.cross(d1) / denom
    origin = seg1.start + d1.scale(a)

    L1, L2 = sqrt_exact(d1.norm2()), sqrt_exact(d2.norm2())
    if L1 is None or L2 is None:
        f1, f2 = seg1.length(), seg2.length()
        sigma = 2.0 / (f1 + f2)
        data = NumericCross(-a.to_float() * f1 * sigma, -b.to_float() * f2 * sigma, f1 * sigma, f2 * sigma)
        return NormalizedPair("nonparallel", data, NUMERIC_FLAGGED)

    sigma = 2 / (L1 + L2)
    u1, u2 = d1.scale(L1.inverse()), d2.scale(L2.inverse())
    frame = AffineMap.linear([[u1[0], u2[0]], [u1[1], u2[1]]])
    to_axes = frame.inverse()
    scaled = AffineMap.linear([[sigma * v for v in row] for row in to_axes.matrix])
    provenance = AffineMap(scaled.matrix, -scaled.apply_linear(origin))
    config = CrossConfig(-a * L1 * sigma, -b * L2 * sigma, L1 * sigma, L2 * sigma, provenance)
    return NormalizedPair("nonparallel", config, EXACT)


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------

def classify_cross(c: CrossConfig) -> ClassificationResult:
    s = c.t1 + c.t2
    d = c.t1 - c.t2
    matched = []
    if c.equal_lengths:
        if s.is_integer() and s != -1:
            matched.append(SUM_IN_Z)
        if d.is_integer() and d != 0:
            matched.append(DIFF_IN_Z)
    else:
        if s.is_even_integer():
            matched.append(SUM_IN_2Z)
        if (d - c.T2).is_even_integer():
            matched.append(DIFF_IN_2Z)
    return ClassificationResult("nonparallel", bool(matched), tuple(matched), c, EXACT)


def _near_integer(x: float, tol: float) -> int | None:
    n = round(x)
    return n if abs(x - n) <= tol else None


def classify_cross_numeric(c: NumericCross, tol: float = NUMERIC_INTEGER_TOL) -> ClassificationResult:
    s, d = c.t1 + c.t2, c.t1 - c.t2
    matched = []
    if abs(c.T1 - c.T2) <= tol:
        n = _near_integer(s, tol)
        if n is not None and n != -1:
            matched.append(SUM_IN_Z)
        n = _near_integer(d, tol)
        if n is not None and n != 0:
            matched.append(DIFF_IN_Z)
    else:
        n = _near_integer(s, tol)
        if n is not None and n % 2 == 0:
            matched.append(SUM_IN_2Z)
        n = _near_integer(d - c.T2, tol)
        if n is not None and n % 2 == 0:
            matched.append(DIFF_IN_2Z)
    return ClassificationResult("nonparallel", bool(matched), tuple(matched), c, NUMERIC_FLAGGED)


def classify_collinear(len1: Any, len2: Any, gap: Any) -> ClassificationResult:
    len1, len2, gap = as_scalar(len1), as_scalar(len2), as_scalar(gap)
    if len1.sign() <= 0 or len2.sign() <= 0:
        raise ValueError("interval lengths must be positive")
    if gap.sign() < 0:
        raise ValueError("gap must be nonnegative")
    sigma = 2 / (len1 + len2)
    len1, len2, gap = len1 * sigma, len2 * sigma, gap * sigma
    if len1 == len2:
        matched = (GAP_IN_Z,) if gap.is_integer() else ()
    else:
        matched = (GAP_IN_2Z,) if gap.is_even_integer() else ()
    data = LineGapData(len1, len2, gap, ExactScalar(0), len1 + gap, ExactScalar(0), sigma, Point.of(1))
    return ClassificationResult("collinear", bool(matched), matched, data, EXACT)


def classify_two_segments(inp: TwoSegmentInput) -> ClassificationResult:
    norm = normalize_two_segments(inp)
    if norm.geometry == "nonparallel":
        if isinstance(norm.data, NumericCross):
            return classify_cross_numeric(norm.data)
        return classify_cross(norm.data)
    data = norm.data
    if norm.geometry == "parallel":
        return ClassificationResult("parallel", True, (PARALLEL,), data, EXACT)
    result = classify_collinear(data.len1, data.len2, data.gap)
    return ClassificationResult("collinear", result.spectral, result.matched_conditions, data, EXACT)


def gap_ratio(c: CrossConfig, line: str) -> ExactScalar:
    """Gap between the projections onto y = -x ("minus") or y = x ("plus") over the sum of their lengths."""
    s, d = c.t1 + c.t2, c.t1 - c.t2
    half = ExactScalar(1) / 2
    if line == "minus":
        if c.equal_lengths and not (s.is_integer() and s != -1):
            raise NonSpectralError(f"{SUM_IN_Z} fails: t1+t2 = {s}")
        if not c.equal_lengths and not s.is_even_integer():
            raise NonSpectralError(f"{SUM_IN_2Z} fails: t1+t2 = {s}")
        return half * (abs(s + 1) - 1)
    if line == "plus":
        if c.equal_lengths:
            if not (d.is_integer() and d != 0):
                raise NonSpectralError(f"{DIFF_IN_Z} fails: t1-t2 = {d}")
            return half * (abs(d) - 1)
        if not (d - c.T2).is_even_integer():
            raise NonSpectralError(f"{DIFF_IN_2Z} fails: t1-t2-T2 = {d - c.T2}")
        return half * (abs(d - c.T2 + 1) - 1)
    raise ValueError(f"line must be 'plus' or 'minus', got {line!r}")
