"""Command line entry point: ``cuspiso <subcommand> ...``.

Exit codes: 0 success, 1 a verdict came out false, 2 usage or runtime error.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

from . import experiments as ex
from .cusps import cusp_shapes, develop_cusp, export_cusp_svg, shapes_csv
from .equations import build_filling_equations
from .numerics import NumericsError
from .solver import DEFAULT_SEED, SolverError, solve_complete, solve_filled, volume
from .triangulation import TriangulationError


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    try:
        if "," in t:
            re, im = t.split(",")
            return complex(float(re), float(im))
        return complex(t.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_pq(text: str):
    try:
        p, q = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q but got {text!r}") from None
    return tuple(int(x) if x.is_integer() else x for x in (p, q))


def parse_fill(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected cusp=p,q but got {text!r}")
    cusp, pq = text.split("=", 1)
    return (cusp.strip(),) + parse_pq(pq)


def _cusp_list(text: str):
    return [c.strip() for c in text.split(",") if c.strip()]


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cuspiso", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fills=False, fmt=True):
        p.add_argument("--manifold", default="fig8", help="census name or path to a tri v1 file")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", help="output file (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="json")
        if fills:
            p.add_argument("--fill", type=parse_fill, action="append", default=[], metavar="CUSP=P,Q")

    common(sub.add_parser("solve", help="complete structure"))
    common(sub.add_parser("fill", help="Dehn filled structure"), fills=True)
    common(sub.add_parser("shapes", help="cusp shapes"), fills=True)
    p = sub.add_parser("equations", help="dump the equation system as TSV")
    common(p, fills=True, fmt=False)

    p = sub.add_parser("isolation", help="shape changes under filling")
    common(p, fills=True)
    p.add_argument("--observe", action="append", default=[], help="cusp(s), comma separated")
    p.add_argument("--tol", type=float, default=ex.TOL_ISO)

    p = sub.add_parser("brunnian", help="Brunnian isolation verdict")
    common(p)
    p.add_argument("--cusps", required=True, type=_cusp_list)
    p.add_argument("--pq", type=parse_pq, default=(5, 0))
    p.add_argument("--tol", type=float, default=ex.TOL_ISO)
    p.add_argument("--tol-change", type=float, default=ex.TOL_CHANGE)

    p = sub.add_parser("derivative", help="first-order shape derivative")
    common(p)
    p.add_argument("--filled", required=True, type=_cusp_list)
    p.add_argument("--observe", required=True)
    p.add_argument("--h", type=float, default=1e-3)

    p = sub.add_parser("tiling", help="Napoleon tiling as SVG")
    p.add_argument("--t", type=parse_complex, default=complex(0.4, 0.2))
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("hexagon-torus", help="modulus of a two-type hexagon torus")
    p.add_argument("--z", type=parse_complex, required=True)
    p.add_argument("--w", type=parse_complex, required=True)
    p.add_argument("--torus", choices=("first", "second"), default="second")
    p.add_argument("--out")

    p = sub.add_parser("octagon", help="right-triangle octagon")
    p.add_argument("--p", type=parse_complex, default=complex(0.3, 0.4))
    p.add_argument("--out", help="SVG output")

    p = sub.add_parser("render", help="developed cusp as SVG")
    p.add_argument("--manifold", default="fig8")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--cusp", default=None)
    p.add_argument("--out", required=True)
    return ap


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _structure_payload(s):
    t = s.triangulation
    shapes = cusp_shapes(s) if s.geometric else {}
    return {
        "kind": "structure",
        "manifold": t.name,
        "n_tet": t.n_tet,
        "z": [[float(z.real), float(z.imag)] for z in s.z],
        "volume": volume(s),
        "residual_norm": s.residual_norm,
        "geometric": s.geometric,
        "fillings": [{"cusp": t.cusp_labels[k], "p": v[0], "q": v[1]} for k, v in sorted(s.fillings.items())],
        "u": {t.cusp_labels[k]: [v.real, v.imag] for k, v in sorted(s.u.items())},
        "cusps": {c: ex._shape_json(sh) for c, sh in shapes.items()},
        "warnings": list(s.warnings),
    }


def _structure_csv(s):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"# {ex.REPORT_VERSION}"])
    w.writerow(["tet", "z_re", "z_im"])
    for i, z in enumerate(s.z):
        w.writerow([i, repr(float(z.real)), repr(float(z.imag))])
    w.writerow(["volume", repr(volume(s))])
    return buf.getvalue()


def _solve(args, fills):
    t = ex.load_manifold(args.manifold)
    base = solve_complete(t, seed=args.seed)
    if not fills:
        return base
    return solve_filled(t, {c: (p, q) for c, p, q in fills}, hint=base)


def _run(args) -> int:
    cmd = args.command
    if cmd in ("solve", "fill"):
        s = _solve(args, getattr(args, "fill", []))
        text = ex.to_json(_structure_payload(s)) if args.format == "json" else _structure_csv(s)
        _emit(text, args.out)
        return 0
    if cmd == "shapes":
        s = _solve(args, args.fill)
        shapes = cusp_shapes(s)
        if args.format == "csv":
            _emit(shapes_csv(shapes.items()), args.out)
        else:
            _emit(ex.to_json({"kind": "shapes", "manifold": s.triangulation.name,
                              "cusps": {c: ex._shape_json(sh) for c, sh in shapes.items()}}), args.out)
        return 0
    if cmd == "equations":
        t = ex.load_manifold(args.manifold)
        _emit(build_filling_equations(t, {c: (p, q) for c, p, q in args.fill}).to_tsv(), args.out)
        return 0
    if cmd == "isolation":
        observe = [c for item in args.observe for c in _cusp_list(item)] or None
        r = ex.run_isolation(args.manifold, args.fill, observe, args.tol, args.seed)
        return _report(r, args, r.isolated)
    if cmd == "brunnian":
        if len(args.cusps) != 3:
            raise UsageError("--cusps needs exactly three cusps")
        r = ex.check_brunnian(args.manifold, args.cusps, args.pq, args.tol, args.tol_change, args.seed)
        return _report(r, args, r.verdict)
    if cmd == "derivative":
        r = ex.first_order_derivative(args.manifold, args.filled, args.observe, args.h, args.seed)
        return _report(r, args, True)
    if cmd == "tiling":
        from .plane import build_napoleon_tiling, render_svg

        scene = build_napoleon_tiling(args.t, args.radius, args.orientation)
        render_svg(scene, args.out)
        print(f"{len(scene.triangles)} triangles written to {args.out}")
        return 0
    if cmd == "hexagon-torus":
        from .plane import HexagonTorus, hexagon_torus_modulus, torus_assignment

        h = HexagonTorus.build(args.z, args.w, torus_assignment(args.torus))
        sh = hexagon_torus_modulus(h)
        _emit(ex.to_json({"kind": "hexagon-torus", "torus": args.torus, "z": [args.z.real, args.z.imag],
                          "w": [args.w.real, args.w.imag], "assignment": list(h.corner_assignment),
                          "modulus": ex._shape_json(sh)}), args.out)
        return 0
    if cmd == "octagon":
        from .plane import edge_pairing_translations, lattice_modulus, octagon_vertices, polygon_area, render_svg, right_napoleon_octagon

        scene = right_napoleon_octagon(args.p)
        pts = octagon_vertices(scene)
        tr = edge_pairing_translations(pts)
        sh = lattice_modulus(tr)
        payload = {"kind": "octagon", "p": [args.p.real, args.p.imag], "area": polygon_area(pts),
                   "vertices": [[v.real, v.imag] for v in pts], "translations": [[v.real, v.imag] for v in tr],
                   "modulus": ex._shape_json(sh)}
        if args.out:
            render_svg(scene, args.out)
        sys.stdout.write(ex.to_json(payload))
        return 0
    if cmd == "render":
        t = ex.load_manifold(args.manifold)
        s = solve_complete(t, seed=args.seed)
        d = develop_cusp(t, s, args.cusp if args.cusp is not None else 0)
        export_cusp_svg(d, args.out)
        print(f"cusp {d.label}: {len(d.placed)} triangles written to {args.out}")
        return 0
    raise UsageError(f"unknown command {cmd}")


def _report(r, args, ok: bool) -> int:
    _emit(ex.to_json(ex.report_dict(r)) if args.format == "json" else ex.to_csv(r), args.out)
    return 0 if ok else 1


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except (UsageError, ex.ExperimentError, SolverError, NumericsError, TriangulationError, KeyError, ValueError, OSError) as exc:
        print(f"cuspiso: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
