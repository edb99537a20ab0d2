import collections
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuspiso.cusps import (
    IncompleteCuspError,
    apply_basis_change,
    cusp_shape,
    cusp_shapes,
    develop_cusp,
    export_cusp_svg,
    modular_distance,
    reduce_modulus,
    shape_from_tau,
    shapes_csv,
)
from cuspiso.solver import solve_filled
from cuspiso.triangulation import CENSUS_NAMES, census
from cuspiso.triangulation.homology import CuspHomology

import oracles

HEX = oracles.OMEGA


def _in_domain(tau):
    return tau.imag > 0 and -0.5 - 1e-12 <= tau.real <= 0.5 + 1e-12 and abs(tau) >= 1 - 1e-12


def test_fig8_develop(fig8, fig8_complete):
    d = develop_cusp(fig8, fig8_complete, 0)
    assert len(d.placed) == 8
    assert abs(d.meridian.scale - 1) < 1e-10 and abs(d.longitude.scale - 1) < 1e-10
    sh = cusp_shape(d)
    assert abs(sh.reduced - 2 * math.sqrt(3) * 1j) < 1e-10


def test_napoleon_dark_cusp_hexagon(napoleon, napoleon_complete):
    d = develop_cusp(napoleon, napoleon_complete, "c1")
    assert len(d.placed) == 6
    for pos in d.placed.values():
        a, b, c = pos.values()
        assert abs(abs(a - b) - abs(b - c)) < 1e-12 and abs(abs(a - b) - abs(c - a)) < 1e-12
    # the torus has three vertices, each of degree six
    classes = napoleon.corner_classes(napoleon.cusp_index("c1"))
    assert sorted(collections.Counter(classes.values()).values()) == [6, 6, 6]


def test_napoleon_light_cusp(napoleon, napoleon_complete):
    d = develop_cusp(napoleon, napoleon_complete, "d1")
    assert len(d.placed) == 18


def test_napoleon_all_hexagonal(napoleon_complete):
    shapes = cusp_shapes(napoleon_complete)
    assert len(shapes) == 6
    for sh in shapes.values():
        assert abs(sh.reduced - HEX) < 1e-10


def test_spanning_tree_independence(napoleon, napoleon_complete):
    for c in ("c2", "d3"):
        a = cusp_shape(develop_cusp(napoleon, napoleon_complete, c))
        tris = sorted(napoleon.cusp_triangles(napoleon.cusp_index(c)))
        b = cusp_shape(develop_cusp(napoleon, napoleon_complete, c, root=tris[-1], order=[3, 1, 2, 0]))
        assert abs(a.reduced - b.reduced) < 1e-10


def test_basis_independence(fig8):
    from cuspiso.solver import solve_complete

    h = CuspHomology(fig8, 0)
    ref = None
    for m, l in [((1, 0), (0, 1)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, 1), (-1, 0)), ((3, -1), (-2, 1))]:
        t = fig8.with_peripheral({0: (h.path_for(m), h.path_for(l))})
        sh = cusp_shapes(solve_complete(t))["k0"]
        ref = ref or sh.reduced
        assert abs(sh.reduced - ref) < 1e-10


def test_filled_cusp_refused(fig8):
    s = solve_filled(fig8, {0: (5, 1)})
    with pytest.raises(IncompleteCuspError):
        develop_cusp(fig8, s, 0)


def test_square_lattice():
    sh = shape_from_tau(1 + 1j)
    assert abs(sh.reduced - 1j) < 1e-15


def test_reduction_ties():
    assert abs(reduce_modulus(-0.5 + 1j)[0] - (0.5 + 1j)) < 1e-15
    r, _ = reduce_modulus(-0.5 + math.sqrt(3) / 2 * 1j)
    assert abs(r - HEX) < 1e-12
    y = math.sqrt(1 - 0.16)
    r, _ = reduce_modulus(complex(-0.4, y))
    assert abs(r - complex(0.4, y)) < 1e-12


def test_lower_half_plane_recorded():
    sh = shape_from_tau(0.2 - 2j)
    (a, b), (c, d) = sh.basis_change
    assert a * d - b * c == -1
    assert abs(apply_basis_change(sh.basis_change, sh.tau) - sh.reduced) < 1e-12


@given(st.floats(-20, 20), st.floats(0.01, 20))
def test_reduce_property(x, y):
    tau = complex(x, y)
    r, m = reduce_modulus(tau)
    (a, b), (c, d) = m
    assert a * d - b * c == 1
    assert _in_domain(r)
    assert abs((a * tau + b) / (c * tau + d) - r) < 1e-8 * max(1, abs(r))


@given(st.floats(-5, 5), st.floats(0.05, 5), st.sampled_from([(1, 1, 0, 1), (0, -1, 1, 0), (2, 1, 1, 1), (1, -3, 0, 1)]))
def test_reduction_is_modular_invariant(x, y, m):
    a, b, c, d = m
    tau = complex(x, y)
    r1, _ = reduce_modulus(tau)
    r2, _ = reduce_modulus((a * tau + b) / (c * tau + d))
    assert modular_distance(r1, r2) < 1e-9


def test_modular_distance_boundary():
    assert modular_distance(0.5 + 2j, -0.5 + 2j) < 1e-15
    assert modular_distance(HEX, HEX) == 0


def test_shapes_csv(napoleon_complete):
    text = shapes_csv(cusp_shapes(napoleon_complete).items())
    rows = text.strip().split("\n")
    assert rows[0].startswith("cusp,tau_re")
    assert len(rows) == 7


@pytest.mark.parametrize("name,cusp,count", [("fig8", 0, 8), ("napoleon", "d1", 18)])
def test_export_svg(tmp_path, name, cusp, count):
    from cuspiso.solver import solve_complete

    t = census(name)
    d = develop_cusp(t, solve_complete(t), cusp)
    export_cusp_svg(d, tmp_path / "a.svg")
    export_cusp_svg(d, tmp_path / "b.svg")
    a = (tmp_path / "a.svg").read_bytes()
    assert a == (tmp_path / "b.svg").read_bytes()
    assert a.count(b"<path") == 9 * count
