#!/usr/bin/env python3
"""
Growth of orthogonal sets.

Ball counts and their linear fit, the Fourier energy integral over a ball,
dyadic entropy of a measure and the entropy bound on ball counts, an
empirical Ahlfors-David estimate and the O(h^s) count bound it implies.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

import numpy as np
from scipy import optimize, stats

from config import DEFAULT_SEED, SEGSPEC_THREADS
from measure import AffineMap, AtomPiece, Measure, Point, SegmentPiece, affine_pushforward, fourier_eval
from scalar import ExactScalar
from spectra import SpectrumSpec

SUPERLINEAR_FACTOR = 1.1
SATURATION_SLOPE = 0.1
DELTA_REFINEMENTS = 4


def _parallel_map(fn, items: Sequence[Any]) -> list[Any]:
    """fn over items on the worker pool, results back in input order."""
    results: list[Any] = [None] * len(items)
    with ThreadPoolExecutor(max_workers=SEGSPEC_THREADS) as executor:
        futures = {executor.submit(fn, item): idx for idx, item in enumerate(items)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


# =============================================================================
# SECTION 1: BALL COUNTS
# =============================================================================

@dataclass
class GrowthProfile:
    samples: list[tuple[list[float], float, int]]
    slope: float
    intercept: float
    max_ratio: float
    superlinear: bool

    def to_json(self) -> dict:
        return {
            "samples": [{"center": c, "R": r, "count": n} for c, r, n in self.samples],
            "slope": self.slope,
            "intercept": self.intercept,
            "max_ratio": self.max_ratio,
            "superlinear": self.superlinear,
        }


def count_in_ball(s: SpectrumSpec, center: Any, R: float) -> int:
    if R <= 0:
        raise ValueError("radius must be positive")
    return s.count_in_ball(center, R)


def growth_profile(
    s: SpectrumSpec, Rmax: float, centers: Sequence[Any] | None = None, points: int = 13
) -> GrowthProfile:
    """Counts on a log-spaced grid over two decades below Rmax; flags count/R growing across the top decade."""
    if Rmax < 1:
        raise ValueError("Rmax must be at least 1")
    centers = [np.zeros(s.dimension)] if not centers else [
        np.asarray(c.to_floats() if isinstance(c, Point) else c, dtype=float) for c in centers
    ]
    radii = np.geomspace(Rmax / 100, Rmax, points)
    low = Rmax / 10

    def profile(center: np.ndarray) -> list[int]:
        return [count_in_ball(s, center, r) for r in radii]

    counts = _parallel_map(profile, centers)
    samples = [
        (c.tolist(), float(r), int(n)) for c, row in zip(centers, counts) for r, n in zip(radii, row)
    ]
    fit = stats.linregress([r for _, r, _ in samples], [n for _, _, n in samples])

    superlinear = False
    for c in centers:
        top = count_in_ball(s, c, Rmax) / Rmax
        bottom = count_in_ball(s, c, low) / low
        if top > SUPERLINEAR_FACTOR * bottom:
            superlinear = True
    ratios = [n / r for _, r, n in samples if r >= 1]
    return GrowthProfile(samples, float(fit.slope), float(fit.intercept), max(ratios, default=0.0), superlinear)


# =============================================================================
# SECTION 2: FOURIER ENERGY
# =============================================================================

def default_grid_step(m: Measure) -> float:
    diameter = m.diameter()
    return min(0.05, 1.0 / (4 * diameter)) if diameter > 0 else 0.05


def fourier_energy(m: Measure, R: float, grid_step: float | None = None) -> float:
    """Midpoint-rule estimate of the integral of |mu-hat|^2 over the ball |t| < R."""
    if R <= 0:
        raise ValueError("radius must be positive")
    step = default_grid_step(m) if grid_step is None else grid_step
    if not 0 < step <= 0.1:
        raise ValueError("grid step must lie in (0, 0.1]")
    axis = np.arange(-R + step / 2, R, step)

    if m.dimension == 1:
        values = np.abs(fourier_eval(m, axis[np.abs(axis) < R])) ** 2
        return math.fsum(values) * step
    if m.dimension != 2:
        raise ValueError("energy quadrature supports dimensions 1 and 2")

    def row(x: float) -> float:
        ys = axis[x * x + axis * axis < R * R]
        if not len(ys):
            return 0.0
        grid = np.column_stack([np.full(len(ys), x), ys])
        return math.fsum(np.abs(fourier_eval(m, grid)) ** 2)

    return math.fsum(_parallel_map(row, list(axis))) * step * step


class LevEstimate(NamedTuple):
    alpha: float
    slope: float
    intercept: float
    energies: list[tuple[float, float]]
    saturated: bool

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "slope": self.slope,
            "intercept": self.intercept,
            "energies": [{"R": r, "energy": e} for r, e in self.energies],
            "saturated": self.saturated,
        }


def lev_exponent_estimate(m: Measure, radii: Sequence[float], grid_step: float | None = None) -> LevEstimate:
    """alpha = d - (log-log slope of the energy); saturated when the energy stops growing."""
    radii = sorted(float(r) for r in radii)
    if len(radii) < 3:
        raise ValueError("need at least three radii")
    energies = [fourier_energy(m, r, grid_step) for r in radii]
    if len(set(radii)) < 2 or min(energies) <= 0:
        raise ValueError("degenerate regression: radii must differ and energies be positive")
    fit = stats.linregress(np.log(radii), np.log(energies))
    slope = float(fit.slope)
    return LevEstimate(m.dimension - slope, slope, float(fit.intercept),
                       list(zip(radii, energies)), slope < SATURATION_SLOPE)


# =============================================================================
# SECTION 3: DYADIC CELLS AND ENTROPY
# =============================================================================

Cell = tuple[int, ...]


def _cell_of(p: Point, n: int) -> Cell:
    scale = 2 ** n
    return tuple(math.floor(c * scale) for c in p)


def dyadic_cells(m: Measure, n: int) -> dict[Cell, Measure]:
    """Restriction of the probability measure to each occupied half-open cell of side 2^-n."""
    if n < 0:
        raise ValueError("dyadic level must be nonnegative")
    mp, _ = m.normalized()
    scale = ExactScalar(2) ** n
    atoms: dict[Cell, list[AtomPiece]] = {}
    segments: dict[Cell, list[SegmentPiece]] = {}

    for a in mp.atoms:
        atoms.setdefault(_cell_of(a.at, n), []).append(a)
    for seg in mp.segments:
        d = seg.direction
        cuts = {ExactScalar(0), ExactScalar(1)}
        for i in range(mp.dimension):
            if not d[i]:
                continue
            ends = sorted((seg.start[i] * scale, seg.end[i] * scale))
            for j in range(math.ceil(ends[0]), math.floor(ends[1]) + 1):
                t = (ExactScalar(j) / scale - seg.start[i]) / d[i]
                if 0 < t < 1:
                    cuts.add(t)
        params = sorted(cuts)
        for lo, hi in zip(params, params[1:]):
            mid = seg.start + d.scale((lo + hi) / 2)
            piece = SegmentPiece(seg.start + d.scale(lo), seg.start + d.scale(hi), seg.mass * (hi - lo))
            segments.setdefault(_cell_of(mid, n), []).append(piece)

    cells = sorted(set(atoms) | set(segments))
    return {
        c: Measure(tuple(atoms.get(c, ())), tuple(segments.get(c, ())), mp.dimension) for c in cells
    }


def dyadic_masses(m: Measure, n: int) -> dict[Cell, ExactScalar]:
    return {c: cell.total_mass for c, cell in dyadic_cells(m, n).items()}


def dyadic_entropy(m: Measure, n: int) -> float:
    """H_n = sum over cells of -mu(D) log2 mu(D)."""
    masses = [w.to_float() for w in dyadic_masses(m, n).values()]
    return math.fsum(-w * math.log2(w) for w in masses if w > 0)


def rescaled_cell(cell_measure: Measure, cell: Cell, n: int) -> Measure:
    """mu restricted to D, normalized and blown up so that D becomes the unit cube."""
    d = cell_measure.dimension
    scale = ExactScalar(2) ** n
    blow_up = AffineMap(
        tuple(tuple(scale if i == j else ExactScalar(0) for j in range(d)) for i in range(d)),
        Point(tuple(-k for k in cell)),
    )
    return affine_pushforward(cell_measure.normalized()[0], blow_up)


def _min_abs_fourier(measures: Sequence[Measure], r: float, directions: np.ndarray, radial: int) -> float:
    ts = np.linspace(0.0, r, radial)
    best = math.inf
    for nu in measures:
        if nu.dimension == 1:
            freqs = np.concatenate([ts, -ts])[:, None]
        else:
            freqs = (ts[:, None, None] * directions[None, :, :]).reshape(-1, nu.dimension)
        best = min(best, float(np.min(np.abs(fourier_eval(nu, freqs)))))
    return best


def estimate_delta(
    m: Measure,
    epsilon: float,
    levels: Sequence[int],
    directions: int = 32,
    radial: int = 33,
    xtol: float = 1e-9,
) -> float:
    """Radius at which the smallest rescaled cell transform modulus reaches epsilon, bracketed by doubling."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    # congruent cells rescale to the same measure
    measures = list(dict.fromkeys(
        rescaled_cell(cell, c, n) for n in sorted(set(levels)) for c, cell in dyadic_cells(m, n).items()
    ))
    angles = np.linspace(0.0, np.pi, directions, endpoint=False)
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])

    def gap(r: float) -> float:
        return _min_abs_fourier(measures, r, dirs, radial) - epsilon

    # gap(0) = 1 - epsilon > 0 for probability measures
    lo, hi = 0.0, 1.0
    while gap(hi) > 0 and hi < 64:
        lo, hi = hi, 2 * hi
    if gap(hi) > 0:
        return hi
    return float(optimize.brentq(gap, lo, hi, xtol=xtol))


def offset_from_delta(delta: float) -> int:
    """Smallest integer rho >= 0 with 2^-rho < delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return max(0, math.floor(-math.log2(delta)) + 1)


def level_for_radius(h: float) -> int:
    """n_h with 2^(n_h - 1) < h <= 2^n_h."""
    if h <= 0:
        raise ValueError("radius must be positive")
    n = math.ceil(math.log2(h))
    while 2.0 ** (n - 1) >= h:
        n -= 1
    while 2.0 ** n < h:
        n += 1
    return n


@dataclass
class EntropyParams:
    level: int
    masses: dict[Cell, float]
    entropy: float
    offset: int
    epsilon: float

    def __post_init__(self) -> None:
        if self.entropy < 0:
            raise ValueError("entropy is nonnegative")

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "entropy": self.entropy,
            "offset": self.offset,
            "epsilon": self.epsilon,
            "cells": [{"cell": list(c), "mass": w} for c, w in sorted(self.masses.items())],
        }


@dataclass
class EntropyReport:
    rows: list[tuple[float, int, float]]
    params: list[EntropyParams]
    epsilon: float
    delta: float
    offset: int
    constant: float
    empirical_constant: float
    spread: float
    passed: bool
    delta_levels: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rows": [{"h": h, "count": n, "bound": b} for h, n, b in self.rows],
            "levels": [p.to_json() for p in self.params],
            "epsilon": self.epsilon,
            "delta": self.delta,
            "delta_is_estimate": True,
            "delta_levels": self.delta_levels,
            "offset": self.offset,
            "constant": self.constant,
            "empirical_constant": self.empirical_constant,
            "spread": self.spread,
            "passed": self.passed,
            "notes": self.notes,
        }


def _sample_centers(s: SpectrumSpec, h: float, samples: int, rng: np.random.Generator) -> list[np.ndarray]:
    near = s.points_in_ball(np.zeros(s.dimension), 2 * h)[:samples]
    random = rng.uniform(-2 * h, 2 * h, size=(samples, s.dimension))
    return [np.zeros(s.dimension), *near, *random]


def entropy_bound_check(
    m: Measure,
    s: SpectrumSpec,
    hs: Sequence[float],
    epsilon: float = 0.5,
    samples: int = 16,
    seed: int = DEFAULT_SEED,
    max_level: int = 10,
) -> EntropyReport:
    """count(t, h) <= epsilon^-2 * 2^H_(n_h + rho) over sampled centers t."""
    if epsilon >= 1 or epsilon <= 0:
        raise ValueError("epsilon must lie in (0, 1)")
    if m.dimension != s.dimension:
        raise ValueError("measure and spectrum dimensions differ")
    hs = sorted(float(h) for h in hs)

    def bound_level(h: float, rho: int) -> int:
        return min(max_level + rho, max(0, level_for_radius(h) + rho))

    # delta must cover the levels n_h + rho the bound is read at; rho only grows as levels are added
    sampled = {0, *(bound_level(h, 0) for h in hs)}
    for _ in range(DELTA_REFINEMENTS):
        delta = estimate_delta(m, epsilon, sorted(sampled))
        rho = offset_from_delta(delta)
        needed = {bound_level(h, rho) for h in hs}
        if needed <= sampled:
            settled = True
            break
        sampled |= needed
    else:
        settled = False
    constant = epsilon ** -2
    rng = np.random.default_rng(seed)

    params: dict[int, EntropyParams] = {}
    rows, ratios = [], []
    for h in hs:
        level = bound_level(h, rho)
        if level not in params:
            masses = {c: w.to_float() for c, w in dyadic_masses(m, level).items()}
            H = math.fsum(-w * math.log2(w) for w in masses.values() if w > 0)
            params[level] = EntropyParams(level, masses, H, rho, epsilon)
        growth = 2.0 ** params[level].entropy
        count = max(count_in_ball(s, t, h) for t in _sample_centers(s, h, samples, rng))
        rows.append((h, count, constant * growth))
        ratios.append(count / growth)

    report = EntropyReport(
        rows=rows,
        params=[params[k] for k in sorted(params)],
        epsilon=epsilon,
        delta=delta,
        offset=rho,
        constant=constant,
        empirical_constant=max(ratios),
        spread=max(ratios) / min(ratios) if min(ratios) > 0 else math.inf,
        passed=all(n <= b for _, n, b in rows),
        delta_levels=sorted(sampled),
    )
    report.notes.append("delta is a numerical estimate over sampled directions")
    if not settled:
        report.notes.append(f"delta was not re-estimated at levels {sorted(sampled)} after rho grew to {rho}")
    if any(level_for_radius(h) > max_level for h in hs):
        report.notes.append(f"levels capped at {max_level + rho}")
    return report


# =============================================================================
# SECTION 4: AHLFORS-DAVID REGULARITY
# =============================================================================

class AhlforsEstimate(NamedTuple):
    c: float
    C: float
    samples: int


def ball_mass(m: Measure, x: np.ndarray, r: float) -> float:
    """mu(B(x, r)), segment contributions from the exact chord of the disk."""
    total = 0.0
    for a in m.atoms:
        if np.linalg.norm(a.at.to_floats() - x) <= r:
            total += a.mass.to_float()
    for seg in m.segments:
        p, d = seg.start.to_floats(), seg.direction.to_floats()
        w = p - x
        a, b, c = d @ d, 2 * (w @ d), w @ w - r * r
        disc = b * b - 4 * a * c
        if disc <= 0:
            continue
        root = math.sqrt(disc)
        lo, hi = max(0.0, (-b - root) / (2 * a)), min(1.0, (-b + root) / (2 * a))
        if hi > lo:
            total += seg.mass.to_float() * (hi - lo)
    return total


def ahlfors_estimate(
    m: Measure, s_exp: float, samples: int = 200, radii: Sequence[float] | None = None, seed: int = DEFAULT_SEED
) -> AhlforsEstimate:
    """Empirical min and max of mu(B(x, r)) / r^s over sampled support points and radii."""
    if s_exp < 0:
        raise ValueError("exponent must be nonnegative")
    pieces = [*m.segments, *m.atoms]
    if not pieces:
        raise ValueError("measure has empty support")
    rng = np.random.default_rng(seed)
    diameter = m.diameter() or 1.0
    radii = np.geomspace(diameter / 100, diameter, 12) if radii is None else np.asarray(radii, dtype=float)

    weights = np.array([p.mass.to_float() for p in pieces])
    choice = rng.choice(len(pieces), size=samples, p=weights / weights.sum())
    params = rng.random(samples)
    ratios = []
    for idx, t in zip(choice, params):
        piece = pieces[idx]
        if isinstance(piece, SegmentPiece):
            x = piece.start.to_floats() + t * piece.direction.to_floats()
        else:
            x = piece.at.to_floats()
        ratios.extend(ball_mass(m, x, r) / r ** s_exp for r in radii)
    return AhlforsEstimate(min(ratios), max(ratios), samples)


@dataclass
class AhlforsCountReport:
    s_exp: float
    lower_constant: float
    offset: int
    rows: list[tuple[float, int, float]]
    fitted_exponent: float
    empirical_constant: float
    passed: bool
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "s": self.s_exp,
            "c": self.lower_constant,
            "offset": self.offset,
            "rows": [{"h": h, "count": n, "bound": b} for h, n, b in self.rows],
            "fitted_exponent": self.fitted_exponent,
            "empirical_constant": self.empirical_constant,
            "passed": self.passed,
            "notes": self.notes,
        }


def ahlfors_count_check(
    m: Measure,
    s: SpectrumSpec,
    s_exp: float,
    hs: Sequence[float],
    epsilon: float = 0.5,
    samples: int = 16,
    seed: int = DEFAULT_SEED,
) -> AhlforsCountReport:
    """count(t, h) <= epsilon^-2 * 2^((n_h + rho) s) / c, with c the sampled lower Ahlfors constant."""
    if len(set(hs)) < 2:
        raise ValueError("need at least two radii to fit an exponent")
    estimate = ahlfors_estimate(m, s_exp, seed=seed)
    if estimate.c <= 0:
        raise ValueError(f"no positive lower Ahlfors constant at exponent {s_exp}")
    entropy = entropy_bound_check(m, s, hs, epsilon=epsilon, samples=samples, seed=seed)
    rho = entropy.offset

    rows = []
    for h, count, _ in entropy.rows:
        level = max(0, level_for_radius(h) + rho)
        rows.append((h, count, epsilon ** -2 * 2.0 ** (level * s_exp) / estimate.c))
    fit = stats.linregress(np.log([h for h, _, _ in rows]), np.log([max(n, 1) for _, n, _ in rows]))

    report = AhlforsCountReport(
        s_exp=s_exp,
        lower_constant=estimate.c,
        offset=rho,
        rows=rows,
        fitted_exponent=float(fit.slope),
        empirical_constant=max(n / h ** s_exp for h, n, _ in rows),
        passed=all(n <= b for _, n, b in rows),
        notes=["c and delta are sampled estimates"],
    )
    if fit.slope > s_exp + 0.25:
        report.notes.append(f"counts grow like h^{fit.slope:.2f}, faster than h^{s_exp:g}")
    return report
