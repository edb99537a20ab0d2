"""Render the plane pictures and developed cusps as SVG files.

    python scripts/render_figures.py --outdir figures
"""
import argparse
import pathlib

from cuspiso.cusps import develop_cusp, export_cusp_svg
from cuspiso.plane import build_napoleon_tiling, render_svg, right_napoleon_octagon
from cuspiso.solver import solve_complete
from cuspiso.triangulation import census


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--t", type=complex, default=0.4 + 0.2j)
    args = ap.parse_args(argv)
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    render_svg(build_napoleon_tiling(args.t, 2), out / "napoleon_tiling.svg")
    render_svg(build_napoleon_tiling(args.t, 2, orientation=-1), out / "napoleon_tiling_mirror.svg")
    render_svg(right_napoleon_octagon(0.3 + 0.4j), out / "octagon.svg")
    t = census("napoleon")
    s = solve_complete(t)
    for cusp in ("c1", "d1"):
        export_cusp_svg(develop_cusp(t, s, cusp), out / f"napoleon_{cusp}.svg")
    f8 = census("fig8")
    export_cusp_svg(develop_cusp(f8, solve_complete(f8), 0), out / "fig8_cusp.svg")
    for p in sorted(out.glob("*.svg")):
        print(p)


if __name__ == "__main__":
    main()
