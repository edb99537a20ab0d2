"""Isolation experiments on cusp shapes and their reports."""
from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .cusps import CuspShape, apply_basis_change, cusp_shapes, modular_distance
from .equations import ComplexLength
from .solver import DEFAULT_SEED, SolvedStructure, SolverError, solve_complete, solve_filled
from .triangulation import CENSUS_NAMES, Triangulation, census, parse_triangulation

REPORT_VERSION = "report v1"
TOL_ISO = 1e-9
TOL_CHANGE = 1e-6


class ExperimentError(RuntimeError):
    pass


def load_manifold(name_or_path) -> Triangulation:
    if str(name_or_path) in CENSUS_NAMES:
        return census(str(name_or_path))
    p = Path(name_or_path)
    if p.exists():
        return parse_triangulation(p.read_bytes())
    return census(str(name_or_path))  # raises the lookup error with the list


def _as_triangulation(manifold) -> Triangulation:
    return manifold if isinstance(manifold, Triangulation) else load_manifold(manifold)


_complete_cache: dict = {}


def _complete(t: Triangulation, seed: int) -> SolvedStructure:
    key = (id(t), seed)
    if key not in _complete_cache:
        _complete_cache[key] = (t, solve_complete(t, seed=seed))
    return _complete_cache[key][1]


@dataclass(frozen=True)
class IsolationReport:
    manifold: str
    fillings: tuple  # ((label, p, q), ...)
    observed: tuple
    before: dict  # label -> CuspShape
    after: dict
    deltas: dict  # label -> float
    tol: float
    volume_before: float = float("nan")
    volume_after: float = float("nan")

    @property
    def verdicts(self) -> dict:
        return {c: self.deltas[c] < self.tol for c in self.observed}

    @property
    def isolated(self) -> bool:
        return all(self.verdicts.values())


def run_isolation(manifold, fill_spec, observe=None, tol: float = TOL_ISO, seed: int = DEFAULT_SEED) -> IsolationReport:
    """Fill ``fill_spec`` (iterable of (cusp, p, q)) and compare the reduced
    shapes of the ``observe`` cusps (default: every unfilled cusp) with the
    complete structure."""
    from .solver import volume

    t = _as_triangulation(manifold)
    fill_spec = tuple((t.cusp_labels[t.cusp_index(c)], p, q) for c, p, q in fill_spec)
    filled = {c for c, _, _ in fill_spec}
    if observe is None:
        observe = [c for c in t.cusp_labels if c not in filled]
    observe = tuple(t.cusp_labels[t.cusp_index(c)] for c in observe)
    clash = filled.intersection(observe)
    if clash:
        raise ExperimentError(f"observed cusps {sorted(clash)} are filled")
    base = _complete(t, seed)
    before = cusp_shapes(base, observe)
    if fill_spec:
        try:
            s = solve_filled(t, {c: (p, q) for c, p, q in fill_spec}, hint=base)
        except SolverError as exc:
            raise ExperimentError(f"{t.name}: filling {_fmt_fill(fill_spec)} failed: {exc}") from exc
        after = cusp_shapes(s, observe)
    else:
        s, after = base, before
    deltas = {c: 0.0 if after[c] is before[c] else modular_distance(after[c].reduced, before[c].reduced) for c in observe}
    return IsolationReport(t.name, fill_spec, observe, before, after, deltas, tol, volume(base), volume(s))


def _fmt_fill(spec):
    return " ".join(f"{c}={p},{q}" for c, p, q in spec)


@dataclass(frozen=True)
class BrunnianReport:
    manifold: str
    triple: tuple
    surgery: tuple
    tol_iso: float
    tol_change: float
    singles: tuple  # IsolationReport per single fill
    doubles: tuple
    errors: tuple = ()

    @property
    def verdict(self) -> bool:
        if self.errors:
            return False
        singles_ok = all(max(r.deltas.values()) < self.tol_iso for r in self.singles)
        doubles_move = any(max(r.deltas.values()) > self.tol_change for r in self.doubles)
        return singles_ok and doubles_move


def check_brunnian(manifold, triple, surgery=(5, 0), tol_iso: float = TOL_ISO, tol_change: float = TOL_CHANGE, seed: int = DEFAULT_SEED) -> BrunnianReport:
    """One surgery leaves the other two shapes fixed, for each member; some
    pair of surgeries moves the third."""
    t = _as_triangulation(manifold)
    triple = tuple(t.cusp_labels[t.cusp_index(c)] for c in triple)
    if len(set(triple)) != 3:
        raise ExperimentError("a Brunnian triple needs three distinct cusps")
    p, q = surgery
    singles, doubles, errors = [], [], []
    for k, c in enumerate(triple):
        others = [x for x in triple if x != c]
        try:
            singles.append(run_isolation(t, [(c, p, q)], others, tol_iso, seed))
        except ExperimentError as exc:
            errors.append(str(exc))
        pair = [x for j, x in enumerate(triple) if j != (k + 2) % 3]
        third = triple[(k + 2) % 3]
        try:
            doubles.append(run_isolation(t, [(x, p, q) for x in pair], [third], tol_iso, seed))
        except ExperimentError as exc:
            errors.append(str(exc))
    return BrunnianReport(t.name, triple, (p, q), tol_iso, tol_change, tuple(singles), tuple(doubles), tuple(errors))


@dataclass(frozen=True)
class DerivativeReport:
    """d(tau)/dw at the complete structure, as a real 2x2 matrix.

    w = u^2 with u the meridian complex length of the filled cusp(s): the
    deformed structure depends on u only through u^2, so this is the
    coordinate in which a first-order change is visible.
    """

    observed_cusp: str
    with_respect_to: tuple
    jacobian: tuple  # ((dRe/dRe w, dRe/dIm w), (dIm/dRe w, dIm/dIm w))
    h: float
    coarse: tuple  # jacobian from step h
    fine: tuple  # jacobian from step h/2
    error_estimate: float
    coordinate: str = "w=u^2"

    @property
    def norm(self) -> float:
        return math.sqrt(sum(x * x for row in self.jacobian for x in row))


def _observed_tau(t, base_shape: CuspShape, s: SolvedStructure, observed: str) -> complex:
    sh = cusp_shapes(s, [observed])[observed]
    return apply_basis_change(base_shape.basis_change, sh.tau)


def _central_jacobian(f, h):
    dre = (f(h) - f(-h)) / (2 * h)
    dim = (f(1j * h) - f(-1j * h)) / (2 * h)
    return ((dre.real, dim.real), (dre.imag, dim.imag))


def first_order_derivative(manifold, filled, observed, h: float = 1e-3, seed: int = DEFAULT_SEED) -> DerivativeReport:
    """Derivative of the observed cusp's shape with respect to generalized
    surgery on ``filled`` (a cusp or several cusps deformed equally), by
    central differences in w = u^2 at steps h and h/2 and Richardson
    extrapolation."""
    if not 1e-5 <= h <= 1e-2:
        raise ExperimentError("step h must lie in [1e-5, 1e-2]")
    t = _as_triangulation(manifold)
    filled = (filled,) if isinstance(filled, (str, int)) else tuple(filled)
    filled = tuple(t.cusp_labels[t.cusp_index(c)] for c in filled)
    observed = t.cusp_labels[t.cusp_index(observed)]
    if observed in filled:
        raise ExperimentError("observed cusp is filled")
    base = _complete(t, seed)
    base_shape = cusp_shapes(base, [observed])[observed]
    tau0 = apply_basis_change(base_shape.basis_change, base_shape.tau)

    def probe(w):
        u = cmath.sqrt(w)
        try:
            s = solve_filled(t, {c: ComplexLength(u) for c in filled}, hint=base)
        except SolverError as exc:
            raise ExperimentError(f"probe w={w:.3g} on {','.join(filled)} failed: {exc}") from exc
        return _observed_tau(t, base_shape, s, observed) - tau0

    coarse = _central_jacobian(probe, h)
    fine = _central_jacobian(probe, h / 2)
    rich = tuple(tuple((4 * b - a) / 3 for a, b in zip(ra, rb)) for ra, rb in zip(coarse, fine))
    err = max(abs(a - b) for ra, rb in zip(coarse, fine) for a, b in zip(ra, rb))
    return DerivativeReport(observed, filled, rich, h, coarse, fine, err)


@dataclass(frozen=True)
class SweepConfig:
    manifold: str = "napoleon"
    filled: str = "c1"
    surgeries: tuple = ((4, 1), (5, 0), (6, 1), (7, 2), (8, 3))
    observe: tuple | None = None
    tol: float = TOL_ISO
    seed: int = DEFAULT_SEED


def run_sweep(cfg: SweepConfig) -> list[IsolationReport]:
    """One isolation report per surgery coefficient on a single cusp."""
    return [run_isolation(cfg.manifold, [(cfg.filled, p, q)], cfg.observe, cfg.tol, cfg.seed) for p, q in cfg.surgeries]


# -- reports ------------------------------------------------------------

def _shape_json(sh: CuspShape) -> dict:
    return {
        "tau": [sh.tau.real, sh.tau.imag],
        "reduced": [sh.reduced.real, sh.reduced.imag],
        "basis_change": [list(r) for r in sh.basis_change],
    }


def report_dict(report) -> dict:
    if isinstance(report, IsolationReport):
        return {
            "kind": "isolation",
            "manifold": report.manifold,
            "fillings": [{"cusp": c, "p": p, "q": q} for c, p, q in report.fillings],
            "tol": report.tol,
            "volume_before": report.volume_before,
            "volume_after": report.volume_after,
            "cusps": [
                {
                    "cusp": c,
                    "before": _shape_json(report.before[c]),
                    "after": _shape_json(report.after[c]),
                    "delta": report.deltas[c],
                    "isolated": report.verdicts[c],
                }
                for c in report.observed
            ],
            "isolated": report.isolated,
        }
    if isinstance(report, BrunnianReport):
        return {
            "kind": "brunnian",
            "manifold": report.manifold,
            "triple": list(report.triple),
            "surgery": list(report.surgery),
            "tol_iso": report.tol_iso,
            "tol_change": report.tol_change,
            "singles": [report_dict(r) for r in report.singles],
            "doubles": [report_dict(r) for r in report.doubles],
            "errors": list(report.errors),
            "verdict": report.verdict,
        }
    if isinstance(report, DerivativeReport):
        return {
            "kind": "derivative",
            "observed": report.observed_cusp,
            "filled": list(report.with_respect_to),
            "coordinate": report.coordinate,
            "h": report.h,
            "jacobian": [list(r) for r in report.jacobian],
            "coarse": [list(r) for r in report.coarse],
            "fine": [list(r) for r in report.fine],
            "error_estimate": report.error_estimate,
            "norm": report.norm,
        }
    raise TypeError(f"not a report: {type(report).__name__}")


def to_json(payload: dict) -> str:
    return json.dumps({"version": REPORT_VERSION, **payload}, indent=2, sort_keys=True) + "\n"


def _isolation_rows(r: IsolationReport, extra=()):
    fills = _fmt_fill(r.fillings)
    for c in r.observed:
        a, b = r.after[c].reduced, r.before[c].reduced
        yield [*extra, r.manifold, fills, c, repr(b.real), repr(b.imag), repr(a.real), repr(a.imag), repr(r.deltas[c]), str(r.verdicts[c]).lower()]


def to_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"# {REPORT_VERSION}"])
    head = ["manifold", "fillings", "cusp", "before_re", "before_im", "after_re", "after_im", "delta", "isolated"]
    if isinstance(report, IsolationReport):
        w.writerow(head)
        w.writerows(_isolation_rows(report))
    elif isinstance(report, BrunnianReport):
        w.writerow(["experiment"] + head)
        for r in report.singles:
            w.writerows(_isolation_rows(r, ["single"]))
        for r in report.doubles:
            w.writerows(_isolation_rows(r, ["double"]))
        w.writerow(["verdict", str(report.verdict).lower()])
    elif isinstance(report, DerivativeReport):
        w.writerow(["observed", "filled", "coordinate", "h", "j11", "j12", "j21", "j22", "norm", "error_estimate"])
        (a, b), (c, d) = report.jacobian
        w.writerow([report.observed_cusp, "+".join(report.with_respect_to), report.coordinate, repr(report.h),
                    repr(a), repr(b), repr(c), repr(d), repr(report.norm), repr(report.error_estimate)])
    else:
        raise TypeError(f"not a report: {type(report).__name__}")
    return buf.getvalue()


def cli(args=None) -> int:
    """Run the command line interface on ``args``; returns the exit code."""
    from .cli import main

    return main(args)
