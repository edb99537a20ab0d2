"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every test records a one-line verdict; conftest prints them at the end of
the session (and each line is also printed as the test runs, visible with -s).
"""
import cmath
import itertools
import json
import math
import time

import numpy as np
import pytest

from cuspiso.cusps import cusp_shapes, develop_cusp, export_cusp_svg
from cuspiso.equations import build_filling_equations, evaluate_logs
from cuspiso.experiments import check_brunnian, first_order_derivative, report_dict, run_isolation, to_json
from cuspiso.plane import (
    HexagonTorus,
    LabeledTriangle,
    build_napoleon_tiling,
    edge_pairing_translations,
    hexagon_torus_modulus,
    lattice_modulus,
    napoleon_centers,
    octagon_vertices,
    render_svg,
    right_napoleon_octagon,
    torus_assignment,
    vertex_holonomy_product,
)
from cuspiso.solver import solve_complete, solve_filled, volume
from cuspiso.triangulation import CENSUS_NAMES, census, parse_triangulation, serialize_triangulation

import oracles

pytestmark = pytest.mark.acceptance

OMEGA = oracles.OMEGA
RESULTS = {}


def record(n, ok, detail, elapsed, budget):
    ok = ok and elapsed < budget
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.2f}s / budget {budget:g}s]"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_01_napoleon_property():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    count = 0
    while count < 1000:
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        if abs(z) >= 10 or min(abs(z), abs(1 - z)) < 1e-3:
            continue
        t = LabeledTriangle.from_vertices(0, 1, z)
        c1, c2, c3 = napoleon_centers(t)
        r = (c2 - c1) / (c3 - c1)
        r = r if t.orientation > 0 else r.conjugate()
        worst = max(worst, abs(r - OMEGA))
        count += 1
    record(1, worst < 1e-10, f"1000 triangles, max |ratio - e^(i pi/3)| = {worst:.2e} (tol 1e-10)", time.perf_counter() - t0, 1)


def test_criterion_02_vertex_holonomy():
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    worst = 0.0
    count = 0
    while count < 1000:
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        if min(abs(z), abs(1 - z)) < 1e-3:
            continue
        worst = max(worst, abs(vertex_holonomy_product(z) - 1))
        count += 1
    record(2, worst < 1e-12, f"1000 z, max |product - 1| = {worst:.2e} (tol 1e-12)", time.perf_counter() - t0, 1)


def test_criterion_03_hexagon_torus():
    t0 = time.perf_counter()
    rng = np.random.default_rng(103)
    second, first = torus_assignment("second"), torus_assignment("first")
    worst_second = worst_first = 0.0
    for _ in range(100):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
        worst_second = max(worst_second, abs(hexagon_torus_modulus(HexagonTorus.build(z, OMEGA, second)).reduced - OMEGA))
        worst_first = max(worst_first, abs(hexagon_torus_modulus(HexagonTorus.build(OMEGA, z, first)).reduced - OMEGA))
    ok = worst_second < 1e-10 and worst_first < 1e-10
    record(3, ok, f"100 z: second torus {worst_second:.2e}, swapped {worst_first:.2e} (tol 1e-10)", time.perf_counter() - t0, 5)


def test_criterion_04_octagon():
    t0 = time.perf_counter()
    rng = np.random.default_rng(104)
    worst_area = worst_mod = 0.0
    for _ in range(100):
        p = complex(*rng.uniform(0.001, 0.999, 2))
        pts = octagon_vertices(right_napoleon_octagon(p))
        worst_area = max(worst_area, abs(oracles.shoelace(pts) - 1))
        tr = edge_pairing_translations(pts, lattice_tol=1e-10)  # raises if any edge is unmatched
        worst_mod = max(worst_mod, abs(lattice_modulus(tr).reduced - 1j))
    ok = worst_area < 1e-12 and worst_mod < 1e-12
    record(4, ok, f"100 p: area err {worst_area:.2e} (tol 1e-12), edges matched (1e-10), modulus err {worst_mod:.2e}", time.perf_counter() - t0, 5)


def test_criterion_05_fig8():
    t0 = time.perf_counter()
    s = solve_complete(census("fig8"))
    root = oracles.quadratic_roots(1, -1, 1)[0]
    dz = float(np.max(np.abs(s.z - root)))
    dv = abs(volume(s) - 2.029883212819)
    dv_oracle = abs(volume(s) - 2 * oracles.regular_tet_volume())
    shape = cusp_shapes(s)["k0"].reduced
    ds = abs(shape - 2 * math.sqrt(3) * 1j)
    ok = dz < 1e-10 and dv < 1e-8 and dv_oracle < 1e-8 and ds < 1e-8
    record(5, ok, f"z err {dz:.1e}, volume err {dv:.1e}, shape {shape.imag:.10f}i err {ds:.1e}", time.perf_counter() - t0, 1)


def test_criterion_06_napoleon():
    t0 = time.perf_counter()
    s = solve_complete(census("napoleon"))
    dz = float(np.max(np.abs(s.z - OMEGA)))
    shapes = cusp_shapes(s)
    ds = max(abs(sh.reduced - OMEGA) for sh in shapes.values())
    oracle = 18 * oracles.regular_tet_volume()
    dv = abs(volume(s) - oracle)
    # the criterion's printed constant 18.268949155 is not 18 x the regular
    # volume (18.2689489154); the oracle it cites is what is checked
    literal = abs(volume(s) - 18.268949155)
    ok = len(s.z) == 18 and dz < 1e-10 and len(shapes) == 6 and ds < 1e-10 and dv < 1e-7
    record(6, ok, f"18 z err {dz:.1e}, 6 shapes err {ds:.1e}, volume {volume(s):.10f} vs 18x oracle err {dv:.1e} "
                  f"(printed constant differs by {literal:.1e})", time.perf_counter() - t0, 5)


def test_criterion_07_isolation_sweep():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for p, q in [(4, 1), (5, 0), (6, 1), (7, 2), (8, 3)]:
        r = run_isolation("napoleon", [("c1", p, q)])
        dark = max(r.deltas["c2"], r.deltas["c3"])
        light = max(r.deltas[d] for d in ("d1", "d2", "d3"))
        ok = ok and dark < 1e-9 and light > 1e-4
        parts.append(f"({p},{q}) c:{dark:.0e} d:{light:.1e}")
    record(7, ok, "; ".join(parts), time.perf_counter() - t0, 60)


def test_criterion_08_brunnian():
    t0 = time.perf_counter()
    t = census("napoleon")
    dark, light = ("c1", "c2", "c3"), ("d1", "d2", "d3")
    ok_pure = check_brunnian(t, dark, (5, 0)).verdict and check_brunnian(t, light, (5, 0)).verdict
    mixed = [tr for tr in itertools.combinations(sorted(t.cusp_labels), 3) if tr not in (dark, light)]
    wrong = [tr for tr in mixed if check_brunnian(t, tr, (5, 0)).verdict]
    ok = ok_pure and not wrong and len(mixed) == 18
    record(8, ok, f"dark and light triples true: {ok_pure}; {len(mixed) - len(wrong)}/{len(mixed)} mixed triples false",
           time.perf_counter() - t0, 90)


def test_criterion_09_first_order():
    t0 = time.perf_counter()
    a = first_order_derivative("napoleon", "c1", "c2").norm
    b = first_order_derivative("napoleon", "c2", "c1").norm
    c = first_order_derivative("napoleon", "c1", "d1").norm
    ok = a < 1e-6 and b < 1e-6 and c > 1e-3
    record(9, ok, f"|J| c1->c2 {a:.1e}, c2->c1 {b:.1e} (< 1e-6); c1->d1 {c:.2e} (> 1e-3)", time.perf_counter() - t0, 60)


def test_criterion_10_infrastructure(tmp_path):
    t0 = time.perf_counter()
    roundtrip = all(parse_triangulation(serialize_triangulation(census(n))).structurally_equal(census(n)) for n in CENSUS_NAMES)

    rng = np.random.default_rng(110)
    worst_jac = 0.0
    for name in CENSUS_NAMES:
        t = census(name)
        system = build_filling_equations(t, {0: (5, 1)})
        for _ in range(5):
            z = rng.uniform(-1, 2, t.n_tet) + 1j * rng.uniform(0.1, 2, t.n_tet)
            jac = system.jacobian(z)
            h = 1e-6
            for i in range(t.n_tet):
                dz = np.zeros(t.n_tet, dtype=complex)
                dz[i] = h
                num = (system.residual(*evaluate_logs(z + dz)) - system.residual(*evaluate_logs(z - dz))) / (2 * h)
                worst_jac = max(worst_jac, float(np.max(np.abs(num - jac[:, i]))) / max(1.0, float(np.max(np.abs(jac)))))

    fig8 = census("fig8")
    cont = float(np.max(np.abs(solve_filled(fig8, {0: (5, 1)}, steps=8).z - solve_filled(fig8, {0: (5, 1)}, steps=64).z)))

    scene = build_napoleon_tiling(0.4 + 0.2j, 1)
    render_svg(scene, tmp_path / "a.svg")
    render_svg(build_napoleon_tiling(0.4 + 0.2j, 1), tmp_path / "b.svg")
    d = develop_cusp(fig8, solve_complete(fig8), 0)
    export_cusp_svg(d, tmp_path / "c.svg")
    export_cusp_svg(d, tmp_path / "d.svg")
    j1 = to_json(report_dict(run_isolation("napoleon", [("c1", 5, 0)])))
    j2 = to_json(report_dict(run_isolation("napoleon", [("c1", 5, 0)])))
    json.loads(j1)
    same = (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes() \
        and (tmp_path / "c.svg").read_bytes() == (tmp_path / "d.svg").read_bytes() and j1 == j2

    ok = roundtrip and worst_jac < 1e-5 and cont < 1e-10 and same
    record(10, ok, f"round-trip {roundtrip}; jacobian rel err {worst_jac:.1e}; 8 vs 64 steps {cont:.1e}; "
                   f"SVG/JSON bytes identical {same}", time.perf_counter() - t0, 10)
