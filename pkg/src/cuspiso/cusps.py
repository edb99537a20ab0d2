"""Developing cusp cross sections and reading off their shapes."""
from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass

from .solver import SolvedStructure
from .triangulation import CuspPath, CuspTriangle, Triangulation, ccw_corners, edge_shape_index

REDUCTION_EPS = 1e-9


class CuspError(Exception):
    pass


class IncompleteCuspError(CuspError):
    pass


class DevelopmentError(CuspError):
    pass


def corner_parameter(z: complex, v: int, a: int) -> complex:
    k = edge_shape_index(v, a)
    if k == 0:
        return z
    if k == 1:
        return 1 / (1 - z)
    return (z - 1) / z


@dataclass(frozen=True)
class Similarity:
    """The map x -> scale * x + translation."""

    scale: complex
    translation: complex

    def __call__(self, x):
        return self.scale * x + self.translation


@dataclass(frozen=True)
class CuspShape:
    tau: complex
    reduced: complex
    basis_change: tuple  # ((a, b), (c, d))


@dataclass(frozen=True)
class DevelopedCusp:
    cusp: int
    label: str
    placed: dict  # CuspTriangle -> {corner vertex: position}
    holonomies: dict  # "meridian"/"longitude" -> Similarity
    tree: tuple

    @property
    def meridian(self) -> Similarity:
        return self.holonomies["meridian"]

    @property
    def longitude(self) -> Similarity:
        return self.holonomies["longitude"]


def _third_corner(tri: CuspTriangle, z: complex, known: dict) -> dict:
    """Complete a placement from two known corners."""
    ring = ccw_corners(tri.vertex)
    missing = [a for a in ring if a not in known]
    if len(missing) != 1:
        raise ValueError("need exactly two known corners")
    x = missing[0]
    i = ring.index(x)
    y, w = ring[(i + 1) % 3], ring[(i + 2) % 3]
    # counterclockwise (x, y, w): param(y) = (x - y) / (w - y)
    out = dict(known)
    out[x] = known[y] + corner_parameter(z, tri.vertex, y) * (known[w] - known[y])
    return out


def _initial_placement(tri: CuspTriangle, z: complex) -> dict:
    p, nxt, _ = ccw_corners(tri.vertex)
    return _third_corner(tri, z, {p: 0j, nxt: 1 + 0j})


def _place_across(t: Triangulation, tri: CuspTriangle, pos: dict, face: int, zs) -> tuple[CuspTriangle, dict]:
    j, g, perm = t.glue(tri.tet, face)
    nb = CuspTriangle(j, perm[tri.vertex])
    shared = {perm[a]: pos[a] for a in pos if a != face}
    return nb, _third_corner(nb, zs[j], shared)


def develop_path(t: Triangulation, zs, path: CuspPath, start: dict | None = None) -> Similarity:
    """Holonomy of a closed dual path: the similarity taking the initial
    placement of the first triangle to its placement after the loop."""
    t0, v0, _, _ = path.steps[0]
    tri = CuspTriangle(t0, v0)
    pos0 = start if start is not None else _initial_placement(tri, zs[t0])
    pos = pos0
    for (tet, v, _fi, fo) in path.steps:
        tri, pos = _place_across(t, CuspTriangle(tet, v), pos, fo, zs)
    a, b = [x for x in ccw_corners(v0)][:2]
    scale = (pos[b] - pos[a]) / (pos0[b] - pos0[a])
    return Similarity(scale, pos[a] - scale * pos0[a])


def develop_cusp(t: Triangulation, s: SolvedStructure, cusp, root: CuspTriangle | None = None, order=None, tol=1e-10) -> DevelopedCusp:
    """Place every link triangle of ``cusp`` along a spanning tree of the
    dual graph and compute peripheral holonomies.

    ``order`` permutes the face scan order, which changes the spanning tree.
    """
    k = t.cusp_index(cusp)
    if not s.geometric:
        raise DevelopmentError("refusing to develop a non-geometric structure")
    if k in s.system.filling_forms:
        raise IncompleteCuspError(f"cusp {t.cusp_labels[k]} is filled")
    zs = s.z
    tris = t.cusp_triangles(k)
    root = root if root is not None else min(tris)
    faces = list(order) if order is not None else [0, 1, 2, 3]
    placed = {root: _initial_placement(root, zs[root.tet])}
    tree = []
    queue = deque([root])
    while queue:
        tri = queue.popleft()
        for f in faces:
            if f == tri.vertex:
                continue
            nb, pos = _place_across(t, tri, placed[tri], f, zs)
            if nb not in placed:
                placed[nb] = pos
                tree.append((tri, f))
                queue.append(nb)
    if len(placed) != len(tris):
        raise DevelopmentError("cusp link is disconnected")
    scale = max(abs(p) for pos in placed.values() for p in pos.values())
    # off-tree sides agree up to a deck translation at a complete cusp
    for tri, pos in placed.items():
        for f in range(4):
            if f == tri.vertex:
                continue
            nb, g = t.neighbor(tri, f)
            _, expected = _place_across(t, tri, pos, f, zs)
            actual = placed[nb]
            a, b = [x for x in expected if x != g]
            if abs((actual[b] - actual[a]) - (expected[b] - expected[a])) > tol * max(scale, 1.0):
                raise DevelopmentError(f"side of {tri} does not match its neighbour up to translation")
    hol = {}
    mer, lon = t.peripheral[k]
    for name, path in (("meridian", mer), ("longitude", lon)):
        first = CuspTriangle(path.steps[0][0], path.steps[0][1])
        hol[name] = develop_path(t, zs, path, start=placed[first])
    return DevelopedCusp(k, t.cusp_labels[k], placed, hol, tuple(tree))


def _mobius(m, tau):
    (a, b), (c, d) = m
    return (a * tau + b) / (c * tau + d)


def _mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def reduce_modulus(tau: complex, eps: float = REDUCTION_EPS) -> tuple[complex, tuple]:
    """Move ``tau`` to the standard fundamental domain of PSL(2, Z).

    Returns the reduced point and the integer matrix with
    reduced = (a tau + b)/(c tau + d).  Points in the lower half-plane are
    conjugated first and the matrix then has determinant -1 (acting on
    conj(tau)).  Ties: Re in (-1/2, 1/2], and Re >= 0 on the unit circle.
    """
    tau = complex(tau)
    if tau.imag == 0:
        raise CuspError("degenerate modulus on the real line")
    m = ((1, 0), (0, 1))
    if tau.imag < 0:
        tau = tau.conjugate()
        m = ((1, 0), (0, -1))  # determinant records the conjugation
    for _ in range(10000):
        n = math.floor(tau.real + 0.5 - eps)
        if n:
            tau -= n
            m = _mul(((1, -n), (0, 1)), m)
        r = abs(tau)
        if r < 1 - eps or (abs(r - 1) <= eps and tau.real < -eps):
            tau = -1 / tau
            m = _mul(((0, -1), (1, 0)), m)
            continue
        break
    else:
        raise CuspError("modular reduction did not terminate")
    return tau, m


def cusp_shape(d: DevelopedCusp, tol: float = 1e-9) -> CuspShape:
    for name, h in d.holonomies.items():
        if abs(h.scale - 1) > tol:
            raise IncompleteCuspError(f"cusp {d.label}: {name} holonomy has scale {h.scale:.6g}, not a translation")
    tau = d.longitude.translation / d.meridian.translation
    return shape_from_tau(tau)


def shape_from_tau(tau: complex) -> CuspShape:
    reduced, m = reduce_modulus(tau)
    return CuspShape(complex(tau), complex(reduced), m)


def apply_basis_change(m, tau: complex) -> complex:
    """Evaluate a recorded reduction matrix at a nearby tau (locally the
    same branch of the reduction)."""
    (a, b), (c, d) = m
    if a * d - b * c < 0:
        tau = tau.conjugate()
        m = ((a, -b), (c, -d))
    return _mobius(m, tau)


def modular_distance(x: complex, y: complex) -> float:
    """Distance between reduced moduli, allowing for the identifications
    along the boundary of the fundamental domain."""
    best = abs(x - y)
    for cand in (y + 1, y - 1, -1 / y, -1 / y + 1, -1 / y - 1, -1 / (y + 1), -1 / (y - 1)):
        best = min(best, abs(x - cand))
    return best


def shapes_csv(rows) -> str:
    """rows: iterable of (label, CuspShape)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["cusp", "tau_re", "tau_im", "reduced_re", "reduced_im", "a", "b", "c", "d"])
    for label, sh in rows:
        (a, b), (c, d) = sh.basis_change
        w.writerow([label, f"{sh.tau.real:.12g}", f"{sh.tau.imag:.12g}", f"{sh.reduced.real:.12g}", f"{sh.reduced.imag:.12g}", a, b, c, d])
    return buf.getvalue()


def export_cusp_svg(d: DevelopedCusp, path) -> None:
    """Fundamental domain plus its translates by the two holonomies."""
    from .plane import LabeledTriangle, PlaneScene, render_svg

    tris = []
    m, l = d.meridian.translation, d.longitude.translation
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            shift = i * m + j * l
            for tri in sorted(d.placed):
                pos = d.placed[tri]
                a, b, c = ccw_corners(tri.vertex)
                v0, v1, v2 = pos[a] + shift, pos[b] + shift, pos[c] + shift
                tris.append(LabeledTriangle.from_vertices(v0, v1, v2, label=f"{tri.tet}.{tri.vertex}" if (i, j) == (0, 0) else ""))
    render_svg(PlaneScene(tuple(tris), ()), path)


def cusp_shapes(s: SolvedStructure, cusps=None) -> dict:
    """Shapes of the requested (default: all unfilled) cusps, keyed by label."""
    t = s.triangulation
    ks = [t.cusp_index(c) for c in cusps] if cusps is not None else [k for k in range(t.num_cusps) if k not in s.system.filling_forms]
    return {t.cusp_labels[k]: cusp_shape(develop_cusp(t, s, k)) for k in ks}


def holonomy_translations(s: SolvedStructure, cusp) -> tuple[complex, complex]:
    d = develop_cusp(s.triangulation, s, cusp)
    return d.meridian.translation, d.longitude.translation


__all__ = [
    "CuspShape",
    "DevelopedCusp",
    "IncompleteCuspError",
    "Similarity",
    "apply_basis_change",
    "cusp_shape",
    "cusp_shapes",
    "develop_cusp",
    "develop_path",
    "export_cusp_svg",
    "modular_distance",
    "reduce_modulus",
    "shape_from_tau",
]
