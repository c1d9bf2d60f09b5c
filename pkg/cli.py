#!/usr/bin/env python3
"""
Command-line front end.

    python cli.py classify --input pair.json
    python cli.py spectrum --config cross.json
    python cli.py verify --measure m.json --spectrum s.json [--radius 200] [--csv samples.csv]
    python cli.py zeros --config cross.json --points pts.csv --tol 1e-10
    python cli.py zeros --config cross.json --lam 1/2,-1/2 --lam 1,1
    python cli.py project --measure m.json --direction 1,-1
    python cli.py scan --measure m.json [--probe 10000]
    python cli.py growth --spectrum s.json --rmax 1000
    python cli.py energy --measure m.json --rmax 40 --step 0.05
    python cli.py entropy --measure m.json --spectrum s.json --levels 1..8 [--ahlfors 1]
    python cli.py conditions --config cross.json --spectrum s.json
    python cli.py example th-L | python cli.py verify --spectrum -

JSON goes to stdout, progress to stderr. Exit codes: 0 pass/ok, 1 fail or
non-spectral, 2 inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

import numpy as np
import pandas as pd

from classify import (
    NonSpectralError,
    TwoSegmentInput,
    classify_cross,
    classify_two_segments,
)
from config import DEFAULT_ORTHO_RADIUS, DEFAULT_SEED, DEFAULT_TOL, FLOAT_FORMAT, SCHEMA
from growth import ahlfors_count_check, entropy_bound_check, growth_profile, lev_exponent_estimate
from measure import (
    AtomPiece,
    LineDir,
    Measure,
    OverlapError,
    Point,
    SegmentPiece,
    arc_length_measure,
    convolve,
    project_to_line,
)
from scalar import ExactScalar, InputError
from spectra import (
    OrthogonalSplit,
    SpectrumSpec,
    cross_line_spectrum,
    equal_spaced_atoms_spectrum,
    parallel_spectrum,
    sumset_spectrum,
    two_segment_spectra,
)
from verify import (
    cross_necessary_conditions,
    injectivity_scan,
    line_spectrum_feasibility,
    projection_multiplicity_probe,
    recognize_line_form,
    verify_spectrum,
)
from zeros import CrossConfig, cross_zero_membership

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3

_STDIN_CACHE: dict[str, Any] = {}


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    exit_code: int
    payload: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.payload = {"schema": SCHEMA, **self.payload}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _log(args: argparse.Namespace, message: str = "") -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _banner(args: argparse.Namespace, title: str) -> None:
    _log(args, "=" * 80)
    _log(args, title)
    _log(args, "=" * 80)


# =============================================================================
# INPUT
# =============================================================================

def load_json(path: str) -> Any:
    """Read JSON from a file or, for "-", from stdin (read once per process)."""
    if path == "-":
        if "-" not in _STDIN_CACHE:
            _STDIN_CACHE["-"] = json.loads(sys.stdin.read())
        return _STDIN_CACHE["-"]
    with open(path) as f:
        return json.load(f)


def parse_point(text: str) -> Point:
    parts = [p.strip() for p in text.split(",")]
    if not all(parts):
        raise InputError(f"cannot parse point {text!r}; use comma-separated scalars like 1/2,-1/2")
    return Point(tuple(ExactScalar.parse(p) for p in parts))


def read_points_csv(path: str) -> list[Point]:
    """Frequencies from a CSV with columns lam1, lam2, ... (header required); cells are read as text."""
    frame = pd.read_csv(path, dtype=str, skipinitialspace=True)
    columns = [c for c in frame.columns if c.strip().startswith("lam")] or list(frame.columns)
    if not columns or frame[columns].isna().any().any():
        raise InputError(f"{path}: expected columns lam1,lam2 with a value in every row")
    return [Point(tuple(ExactScalar.parse(v.strip()) for v in row)) for row in frame[columns].itertuples(index=False)]


def parse_levels(text: str) -> list[int]:
    match = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if lo > hi:
            raise InputError(f"empty level range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as e:
        raise InputError(f"cannot parse levels {text!r}; use 1..8 or 1,2,3") from e


def measure_from(data: Any) -> Measure:
    if isinstance(data, dict) and "measure" in data:
        data = data["measure"]
    if isinstance(data, dict) and "t1" in data:
        return CrossConfig.from_json(data).measure()
    return Measure.from_json(data)


def spectra_from(data: Any) -> list[SpectrumSpec]:
    if isinstance(data, dict) and "spectra" in data:
        data = data["spectra"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise InputError("expected a spectrum object, a list of spectra or a payload with 'spectra'")
    return [SpectrumSpec.from_json(item) for item in data]


def cross_from(data: Any) -> CrossConfig | None:
    if isinstance(data, dict) and isinstance(data.get("cross"), dict):
        return CrossConfig.from_json(data["cross"])
    if isinstance(data, dict) and "t1" in data:
        return CrossConfig.from_json(data)
    return None


def write_csv(path: str | None, rows: Sequence[Sequence[Any]], columns: Sequence[str]) -> None:
    if path:
        pd.DataFrame(list(rows), columns=list(columns)).to_csv(path, index=False, float_format=FLOAT_FORMAT)


# =============================================================================
# BUILT-IN EXAMPLES
# =============================================================================

class Example(NamedTuple):
    name: str
    measure: Measure
    spectra: list[SpectrumSpec]
    cross: CrossConfig | None = None
    note: str = ""

    def to_json(self) -> dict:
        data = {
            "example": self.name,
            "measure": self.measure.to_json(),
            "spectra": [s.to_json() for s in self.spectra],
            "note": self.note,
        }
        if self.cross is not None:
            data["cross"] = self.cross.to_json()
        return data


def _unit_segment(x0: Any, y0: Any, x1: Any, y1: Any) -> tuple[Point, Point]:
    return Point.of(x0, y0), Point.of(x1, y1)


def _example_th_parallel() -> Example:
    alpha = ExactScalar.sqrt2() / 200
    arc = arc_length_measure([_unit_segment(0, 0, 100, 0)])
    third = ExactScalar(1) / 3
    atoms = Measure(
        tuple(AtomPiece(Point.of(x, y), third) for x, y in ((0, 0), (0, 1), (alpha, 2))), (), 2
    )
    split = OrthogonalSplit((Point.of(0, 1), Point.of(1, 0)), 1)
    L = equal_spaced_atoms_spectrum(3, 1, LineDir.of(0, 1))
    M = SpectrumSpec(2, (Point.zero(2),), (Point.of(ExactScalar(1) / 100, 0),))
    spectrum = sumset_spectrum(L, M, split, arc)
    return Example("th-parallel", convolve(arc, atoms), [spectrum], note=f"horizontal shift {alpha}")


def _example_th_l() -> Example:
    corner = arc_length_measure([_unit_segment(0, 0, 1, 0), _unit_segment(0, 0, 0, 1)])
    half = ExactScalar(1) / 2
    pair = Measure((AtomPiece(Point.of(0, 0), half), AtomPiece(Point.of(1, 1), half)), (), 2)
    split = OrthogonalSplit((Point.of(1, -1), Point.of(1, 1)), 1)
    L = cross_line_spectrum(CrossConfig.of(0, 0, 1, 1))[0]
    M = equal_spaced_atoms_spectrum(2, ExactScalar.sqrt2(), LineDir.of(1, 1))
    spectrum = sumset_spectrum(L, M, split, pair)
    return Example("th-L", convolve(corner, pair), [spectrum], note="no line spectrum exists")


def _example_cross(t1: Any, t2: Any, T1: Any, T2: Any) -> Example:
    c = CrossConfig.of(t1, t2, T1, T2)
    spectra = cross_line_spectrum(c) if classify_cross(c).spectral else []
    return Example(c.label(), c.measure(), spectra, c, "spectral" if spectra else "not spectral")


def _example_collinear(l1: Any, l2: Any, g: Any) -> Example:
    l1, l2, g = (ExactScalar.parse(v) for v in (l1, l2, g))
    inp = TwoSegmentInput(
        SegmentPiece(Point.of(0, 0), Point.of(l1, 0), l1),
        SegmentPiece(Point.of(l1 + g, 0), Point.of(l1 + g + l2, 0), l2),
    )
    spectral = classify_two_segments(inp).spectral
    spectra = two_segment_spectra(inp) if spectral else []
    return Example(f"collinear({l1},{l2},{g})", inp.measure(), spectra, note="spectral" if spectral else "not spectral")


def _example_parallel_pair(k: Any = None) -> Example:
    seg1 = SegmentPiece(Point.of(0, 0), Point.of(1, 0), 1)
    seg2 = SegmentPiece(Point.of(0, 1), Point.of(1, 1), 1)
    inp = TwoSegmentInput(seg1, seg2)
    if k is None:
        spectra = two_segment_spectra(inp)
        name = "parallel-pair"
    else:
        spectra = [parallel_spectrum(seg1, seg2, int(k))]
        name = f"parallel-pair({k})"
    return Example(name, inp.measure(), spectra)


def builtin_examples(name: str) -> Example:
    match = re.fullmatch(r"\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*", name)
    if not match:
        raise InputError(f"cannot parse example name {name!r}")
    key, raw = match.group(1), match.group(2)
    params = [p.strip() for p in raw.split(",")] if raw and raw.strip() else []
    try:
        if key == "th-parallel" and not params:
            return _example_th_parallel()
        if key == "th-L" and not params:
            return _example_th_l()
        if key == "cross" and len(params) == 4:
            return _example_cross(*(ExactScalar.parse(p) for p in params))
        if key == "collinear" and len(params) == 3:
            return _example_collinear(*params)
        if key == "parallel-pair" and len(params) <= 1:
            return _example_parallel_pair(*params)
    except (TypeError, ValueError) as e:
        raise InputError(f"bad parameters for example {name!r}: {e}") from e
    raise InputError(
        f"unknown example {name!r}; choose th-parallel, th-L, cross(t1,t2,T1,T2), "
        "collinear(l1,l2,g) or parallel-pair[(k)]"
    )


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def run_classify(args: argparse.Namespace) -> CommandResult:
    data = load_json(args.input)
    cross = cross_from(data)
    if cross is not None and not (isinstance(data, dict) and "measure" in data):
        result = classify_cross(cross)
    else:
        result = classify_two_segments(TwoSegmentInput.from_measure(measure_from(data)))
    mark = "✓" if result.spectral else "✗"
    _log(args, f"{mark} {result.geometry}: {', '.join(result.matched_conditions) or 'no condition holds'}")
    return CommandResult(EXIT_OK if result.spectral else EXIT_FAIL, result.to_json())


def run_spectrum(args: argparse.Namespace) -> CommandResult:
    data = load_json(args.input)
    cross = cross_from(data)
    try:
        if cross is not None and not (isinstance(data, dict) and "measure" in data):
            spectra = cross_line_spectrum(cross)
        else:
            inp = TwoSegmentInput.from_measure(measure_from(data))
            if not classify_two_segments(inp).spectral:
                raise NonSpectralError("the two segments are not spectral")
            spectra = two_segment_spectra(inp, args.k)
    except NonSpectralError as e:
        _log(args, f"✗ {e}")
        return CommandResult(EXIT_FAIL, {"spectral": False, "reason": str(e), "spectra": []})
    for s in spectra:
        _log(args, f"✓ {s.note or s.to_json()}")
    return CommandResult(EXIT_OK, {"spectral": True, "spectra": [s.to_json() for s in spectra]})


def run_verify(args: argparse.Namespace) -> CommandResult:
    spec_data = load_json(args.spectrum)
    if args.measure:
        measure_data = load_json(args.measure)
    elif isinstance(spec_data, dict) and "measure" in spec_data:
        measure_data = spec_data
    else:
        raise InputError("verify needs --measure, or a --spectrum payload that carries a measure")
    m = measure_from(measure_data)
    spectra = spectra_from(spec_data)
    cross = None if args.numeric else (cross_from(measure_data) or cross_from(spec_data))

    _banner(args, f"Verifying {len(spectra)} spectrum candidate(s)")
    reports, rows = [], []
    for i, s in enumerate(spectra):
        report = verify_spectrum(
            m, s, radius=args.radius, grid=args.grid, ortho_radius=args.ortho_radius,
            tol=args.tol, cross=cross, min_sum=args.min_sum,
        )
        mark = {"pass": "✓", "fail": "✗"}.get(report.verdict, "?")
        _log(args, f"{mark} spectrum {i}: {report.verdict} "
                   f"({report.violation_count} violations, Bessel max {report.bessel_max:.12f})")
        reports.append(report)
        rows.extend((i, *x, r, total) for x, r, total in report.completeness_samples)

    columns = ["spectrum", *(f"x{k + 1}" for k in range(m.dimension)), "R", "S"]
    write_csv(args.csv, rows, columns)
    verdicts = [r.verdict for r in reports]
    if "fail" in verdicts:
        code = EXIT_FAIL
    elif "inconclusive" in verdicts:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    return CommandResult(code, {"reports": [r.to_json() for r in reports]})


def run_zeros(args: argparse.Namespace) -> CommandResult:
    if args.cross:
        cross = cross_from(load_json(args.cross))
        if cross is None:
            raise InputError("--cross file must hold t1, t2, T1, T2")
    elif None not in (args.t1, args.t2, args.T1, args.T2):
        cross = CrossConfig.of(*(ExactScalar.parse(v) for v in (args.t1, args.t2, args.T1, args.T2)))
    else:
        raise InputError("zeros needs --cross FILE or all of --t1 --t2 --T1 --T2")
    points = [parse_point(text) for text in args.lam or []]
    if args.points:
        points.extend(read_points_csv(args.points))
    if not points:
        raise InputError("give at least one --lam point or a --points CSV")

    results, rows = [], []
    for lam in points:
        z = cross_zero_membership(cross, lam, args.tol)
        results.append({
            "lambda": lam.to_json(), "member": z.member, "branch": z.branch,
            "certificate": z.certificate, "value": z.value, "reason": z.reason,
        })
        rows.append((lam[0].to_float(), lam[1].to_float(), z.member, z.branch, z.value))
        _log(args, f"{'✓' if z.member else '✗'} {lam}: {z.reason}")
    write_csv(args.csv, rows, ["lam1", "lam2", "member", "branch", "value"])
    return CommandResult(EXIT_OK, {"cross": cross.to_json(), "results": results})


def run_project(args: argparse.Namespace) -> CommandResult:
    m = measure_from(load_json(args.measure))
    projection = project_to_line(m, LineDir(parse_point(args.direction)))
    _log(args, f"{'✓' if projection.injective() else '✗'} injective onto {projection.line.direction}")
    return CommandResult(EXIT_OK, {"injective": projection.injective(), "projection": projection.to_json()})


def run_scan(args: argparse.Namespace) -> CommandResult:
    m = measure_from(load_json(args.measure))
    scan = injectivity_scan(m)
    payload: dict[str, Any] = {"scan": scan.to_json(), "empty": scan.is_empty()}
    _log(args, f"{len(scan.intervals)} injective arc(s), {len(scan.critical)} critical direction(s)")
    if not m.atoms:
        try:
            feasibility = line_spectrum_feasibility(m)
        except ValueError as e:
            payload["feasibility"] = {"error": str(e)}
        else:
            payload["feasibility"] = feasibility.to_json()
            _log(args, f"{'✓' if feasibility.feasible else '✗'} line spectrum: {feasibility.status}"
                       + (f" ({feasibility.obstruction})" if feasibility.obstruction else ""))
    if args.probe:
        probes = []
        for lo, hi in scan.intervals:
            mid = 0.5 * (lo + hi)
            direction = np.array([np.cos(mid), np.sin(mid)])
            multiplicity = projection_multiplicity_probe(m, direction, args.probe, args.seed)
            probes.append({"angle": mid, "multiplicity": multiplicity})
        payload["probes"] = probes
    return CommandResult(EXIT_OK, payload)


def run_growth(args: argparse.Namespace) -> CommandResult:
    spectra = spectra_from(load_json(args.spectrum))
    profiles = [growth_profile(s, args.rmax) for s in spectra]
    rows = [(i, r, n) for i, p in enumerate(profiles) for _, r, n in p.samples]
    write_csv(args.csv, rows, ["spectrum", "R", "count"])
    for i, p in enumerate(profiles):
        _log(args, f"{'✗' if p.superlinear else '✓'} spectrum {i}: slope {p.slope:.6g}, max count/R {p.max_ratio:.6g}")
    code = EXIT_FAIL if any(p.superlinear for p in profiles) else EXIT_OK
    return CommandResult(code, {"profiles": [p.to_json() for p in profiles]})


def run_energy(args: argparse.Namespace) -> CommandResult:
    m = measure_from(load_json(args.measure))
    radii = args.radii or [args.rmax / 4, args.rmax / 2, args.rmax]
    estimate = lev_exponent_estimate(m, radii, args.step)
    write_csv(args.csv, estimate.energies, ["R", "energy"])
    for r, e in estimate.energies:
        _log(args, f"  R={r:g}: energy {e:.10g}")
    _log(args, f"alpha estimate {estimate.alpha:.4f}" + (" (saturated)" if estimate.saturated else ""))
    return CommandResult(EXIT_OK, estimate.to_json())


def run_entropy(args: argparse.Namespace) -> CommandResult:
    m = measure_from(load_json(args.measure))
    spectra = spectra_from(load_json(args.spectrum))
    hs = [2.0 ** n for n in parse_levels(args.levels)]
    reports = [entropy_bound_check(m, s, hs, args.epsilon, seed=args.seed) for s in spectra]
    rows = [(i, h, n, b) for i, rep in enumerate(reports) for h, n, b in rep.rows]
    write_csv(args.csv, rows, ["spectrum", "h", "count", "bound"])
    for i, rep in enumerate(reports):
        _log(args, f"{'✓' if rep.passed else '✗'} spectrum {i}: delta~{rep.delta:.4g}, "
                   f"rho={rep.offset}, empirical C {rep.empirical_constant:.4g}")
    payload = {"reports": [rep.to_json() for rep in reports]}
    passed = all(rep.passed for rep in reports)
    if args.ahlfors is not None:
        checks = [ahlfors_count_check(m, s, args.ahlfors, hs, args.epsilon, seed=args.seed) for s in spectra]
        for i, chk in enumerate(checks):
            _log(args, f"{'✓' if chk.passed else '✗'} spectrum {i}: counts ~ h^{chk.fitted_exponent:.2f}, "
                       f"c~{chk.lower_constant:.4g}")
        payload["ahlfors"] = [chk.to_json() for chk in checks]
        passed = passed and all(chk.passed for chk in checks)
    return CommandResult(EXIT_OK if passed else EXIT_FAIL, payload)


def run_conditions(args: argparse.Namespace) -> CommandResult:
    spec_data = load_json(args.spectrum)
    cross = cross_from(load_json(args.input)) if args.input else cross_from(spec_data)
    if cross is None:
        raise InputError("conditions needs a cross {t1,t2,T1,T2} from --config or the spectrum payload")
    spectra = spectra_from(spec_data)

    _banner(args, f"Necessary conditions for {len(spectra)} candidate(s) on {cross.label()}")
    results = []
    for i, s in enumerate(spectra):
        report = cross_necessary_conditions(cross, s, radius=args.ortho_radius)
        form = recognize_line_form(cross, s)
        failed = ", ".join(report.failed())
        _log(args, f"{'✓' if report.passed else '✗'} spectrum {i}: {failed or 'all conditions hold'}")
        _log(args, f"  line form: {form.reason}")
        results.append({**report.to_json(), "line_form": form.to_json()})
    code = EXIT_OK if all(r["passed"] and r["line_form"]["matches"] for r in results) else EXIT_FAIL
    return CommandResult(code, {"candidates": results})


def run_example(args: argparse.Namespace) -> CommandResult:
    example = builtin_examples(args.name)
    _log(args, f"✓ {example.name}: {len(example.measure.segments)} segment(s), {len(example.spectra)} spectrum(s)")
    return CommandResult(EXIT_OK, example.to_json())


# =============================================================================
# DISPATCH
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="segment-spectra",
        description="Spectrality of arc-length measures on unions of line segments",
    )
    parser.add_argument("--quiet", action="store_true", help="Suppress progress output on stderr")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for randomized sampling. Default: 0")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Decide spectrality of two segments or a cross")
    p.add_argument("--config", "--input", dest="input", required=True,
                   help="Measure JSON with two segments, or a cross {t1,t2,T1,T2}; '-' for stdin")
    p.set_defaults(handler=run_classify)

    p = sub.add_parser("spectrum", help="Construct explicit spectra")
    p.add_argument("--config", "--input", dest="input", required=True,
                   help="Two-segment measure or cross JSON; '-' for stdin")
    p.add_argument("--k", type=int, nargs="+", default=[1, 2, 3], help="Projection indices for parallel pairs")
    p.set_defaults(handler=run_spectrum)

    p = sub.add_parser("verify", help="Check orthogonality and completeness; CSV columns spectrum,x1,x2,R,S")
    p.add_argument("--measure", help="Measure JSON (optional when the spectrum payload carries one)")
    p.add_argument("--spectrum", required=True, help="Spectrum JSON, list, or example payload; '-' for stdin")
    p.add_argument("--radius", type=float, default=200.0, help="Completeness radius Rmax. Default: 200")
    p.add_argument("--ortho-radius", type=float, default=DEFAULT_ORTHO_RADIUS, help="Orthogonality ball radius. Default: 50")
    p.add_argument("--grid", type=int, default=8, help="Sample grid per axis on [0,1]^d. Default: 8")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Zero tolerance. Default: 1e-10")
    p.add_argument("--min-sum", type=float, default=None, help="Require S(x, Rmax) >= this value")
    p.add_argument("--numeric", action="store_true", help="Skip the exact cross zero-set test")
    p.add_argument("--csv", help="Write completeness samples to this CSV")
    p.set_defaults(handler=run_verify)

    p = sub.add_parser("zeros", help="Membership in the cross zero set; CSV columns lam1,lam2,member,branch,value")
    p.add_argument("--config", "--cross", dest="cross", help="Cross JSON {t1,t2,T1,T2}")
    for name in ("--t1", "--t2", "--T1", "--T2"):
        p.add_argument(name, help="Cross parameter (e.g. 1/2 or sqrt2/4)")
    p.add_argument("--lam", action="append", help="Frequency as comma-separated scalars; repeatable")
    p.add_argument("--points", help="CSV of frequencies, columns lam1,lam2 (scalars like 1/2 or sqrt2/4)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Numeric tolerance. Default: 1e-10")
    p.add_argument("--csv", help="Write results to this CSV")
    p.set_defaults(handler=run_zeros)

    p = sub.add_parser("project", help="Project a planar measure onto a line through the origin")
    p.add_argument("--measure", required=True)
    p.add_argument("--direction", required=True, help="Line direction, e.g. 1,-1")
    p.set_defaults(handler=run_project)

    p = sub.add_parser("scan", help="Injective projection directions and line-spectrum feasibility")
    p.add_argument("--measure", required=True)
    p.add_argument("--probe", type=int, default=0, help="Monte-Carlo samples per injective arc (0 = off)")
    p.set_defaults(handler=run_scan)

    p = sub.add_parser("growth", help="Ball counts of a spectrum; CSV columns spectrum,R,count")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--rmax", type=float, default=1000.0, help="Largest radius. Default: 1000")
    p.add_argument("--csv")
    p.set_defaults(handler=run_growth)

    p = sub.add_parser("energy", help="Fourier energy over balls; CSV columns R,energy")
    p.add_argument("--measure", required=True)
    p.add_argument("--rmax", type=float, default=40.0, help="Largest radius. Default: 40")
    p.add_argument("--radii", type=float, nargs="+", help="Explicit radii (at least three)")
    p.add_argument("--step", type=float, default=None, help="Grid step (<= 0.1). Default from the support diameter")
    p.add_argument("--csv")
    p.set_defaults(handler=run_energy)

    p = sub.add_parser("entropy", help="Dyadic entropy bound on ball counts; CSV columns spectrum,h,count,bound")
    p.add_argument("--measure", required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--levels", default="1..8", help="Radii h = 2^n for n in this range. Default: 1..8")
    p.add_argument("--epsilon", type=float, default=0.5, help="Fourier lower bound epsilon. Default: 0.5")
    p.add_argument("--ahlfors", type=float, default=None, metavar="S",
                   help="Also check counts against the dimension-S Ahlfors bound")
    p.add_argument("--csv")
    p.set_defaults(handler=run_entropy)

    p = sub.add_parser("conditions", help="Necessary conditions and line form of candidate spectra of a cross")
    p.add_argument("--config", "--input", dest="input", help="Cross JSON (optional when the spectrum payload carries one)")
    p.add_argument("--spectrum", required=True, help="Spectrum JSON, list, or example payload; '-' for stdin")
    p.add_argument("--ortho-radius", type=float, default=DEFAULT_ORTHO_RADIUS, help="Orthogonality ball radius. Default: 50")
    p.set_defaults(handler=run_conditions)

    p = sub.add_parser("example", help="Emit a built-in construction as JSON")
    p.add_argument("name", help="th-parallel | th-L | cross(t1,t2,T1,T2) | collinear(l1,l2,g) | parallel-pair[(k)]")
    p.set_defaults(handler=run_example)
    return parser


def dispatch(argv: Sequence[str]) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return CommandResult(EXIT_INPUT, {"error": str(e)})
    try:
        return args.handler(args)
    except (InputError, OverlapError, json.JSONDecodeError, OSError, KeyError, ValueError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return CommandResult(EXIT_INPUT, {"error": str(e)})


def main() -> None:
    result = dispatch(sys.argv[1:])
    print(json.dumps(result.payload, indent=2))
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
