"""Homology of cusp tori and of the whole manifold, by integer linear algebra.

Dual closed paths are paired against primal 1-cycles of the link
triangulation (signed crossing counts).  The pairing is unimodular, so the
resulting integer vectors identify homology classes in the torus.
"""
from __future__ import annotations

from collections import deque

import sympy

from .core import CuspPath, CuspTriangle, PeripheralError, ccw_corners


def _canonical_sides(t, cusp):
    """Each link edge is seen from two triangles; pick one side as canonical.

    Returns ``{(tet, vertex, face): (edge_id, sign)}`` with sign +1 on the
    canonical side, and the list of edges as (corner_from, corner_to) in
    link-vertex ids, oriented counterclockwise on the canonical side.
    """
    cls = t.corner_classes(cusp)
    sides = {}
    edges = []
    for tri in sorted(t.cusp_triangles(cusp)):
        for f in range(4):
            if f == tri.vertex or (tri.tet, tri.vertex, f) in sides:
                continue
            other, g = t.neighbor(tri, f)
            eid = len(edges)
            sides[(tri.tet, tri.vertex, f)] = (eid, 1)
            sides[(other.tet, other.vertex, g)] = (eid, -1)
            a, b, c = ccw_corners(tri.vertex)
            # corners of the side in face f, in counterclockwise order
            ring = [a, b, c]
            i = ring.index(f)
            p, q = ring[(i + 1) % 3], ring[(i + 2) % 3]
            edges.append((cls[(tri.tet, tri.vertex, p)], cls[(tri.tet, tri.vertex, q)]))
    return sides, edges


def _primal_cycles(edges):
    """Fundamental cycles of the link 1-skeleton as signed edge vectors."""
    nverts = 1 + max(max(e) for e in edges)
    adj = {v: [] for v in range(nverts)}
    for k, (u, w) in enumerate(edges):
        adj[u].append((k, w, 1))
        adj[w].append((k, u, -1))
    parent = {0: None}
    queue = deque([0])
    tree = set()
    while queue:
        u = queue.popleft()
        for k, w, s in adj[u]:
            if w not in parent:
                parent[w] = (u, k, s)
                tree.add(k)
                queue.append(w)

    def path_to_root(v):
        vec = {}
        while parent[v] is not None:
            u, k, s = parent[v]
            # traversed u -> v with sign s; walking v -> u reverses it
            vec[k] = vec.get(k, 0) - s
            v = u
        return vec

    cycles = []
    for k, (u, w) in enumerate(edges):
        if k in tree:
            continue
        vec = {}
        for e, s in path_to_root(u).items():
            vec[e] = vec.get(e, 0) - s
        vec[k] = vec.get(k, 0) + 1
        for e, s in path_to_root(w).items():
            vec[e] = vec.get(e, 0) + s
        cycles.append(vec)
    return cycles


class CuspHomology:
    """Homology coordinates of dual paths on one cusp torus."""

    def __init__(self, t, cusp: int):
        self.t = t
        self.cusp = cusp
        self.sides, edges = _canonical_sides(t, cusp)
        self.cycles = _primal_cycles(edges)
        self.root = min(t.cusp_triangles(cusp))
        self.fundamental = self._dual_fundamental_cycles()
        vectors = [self._pair_crossings(c) for c in self.fundamental]
        self.basis, self.basis_words = _lattice_basis(vectors)
        if len(self.basis) != 2:
            raise PeripheralError(f"cusp {cusp}: dual cycles span rank {len(self.basis)}, expected 2")

    def pairing(self, path: CuspPath) -> tuple[int, ...]:
        return self._pair_crossings(path_to_crossings(path))

    def _pair_crossings(self, crossings):
        crossing = {}
        for tri, fo in crossings:
            eid, sign = self.sides[(tri.tet, tri.vertex, fo)]
            crossing[eid] = crossing.get(eid, 0) + sign
        return tuple(sum(c.get(e, 0) * n for e, n in crossing.items()) for c in self.cycles)

    def coordinates(self, path: CuspPath) -> tuple[int, int]:
        """Coordinates of the path's class in this object's fixed basis."""
        v = sympy.Matrix(self.pairing(path))
        b = sympy.Matrix([list(r) for r in self.basis]).T
        sol = (b.T * b).LUsolve(b.T * v)
        if b * sol != v or any(not x.is_integer for x in sol):
            raise PeripheralError("path class is not in the dual-cycle lattice")
        return int(sol[0]), int(sol[1])

    def intersection_number(self, p1: CuspPath, p2: CuspPath) -> int:
        """Determinant of the two classes; equals the algebraic intersection
        number up to one global sign fixed per cusp."""
        a, b = self.coordinates(p1)
        c, d = self.coordinates(p2)
        return a * d - b * c

    def _dual_fundamental_cycles(self):
        t = self.t
        parent = {self.root: None}
        queue = deque([self.root])
        order = []
        while queue:
            tri = queue.popleft()
            order.append(tri)
            for f in range(4):
                if f == tri.vertex:
                    continue
                nb, g = t.neighbor(tri, f)
                if nb not in parent:
                    parent[nb] = (tri, f)
                    queue.append(nb)

        def crossings_from_root(tri):
            out = []
            while parent[tri] is not None:
                prev, f = parent[tri]
                out.append((prev, f))
                tri = prev
            return out[::-1]

        tree = {(p[0], p[1]) for p in parent.values() if p is not None}
        seen = set()
        paths = []
        for tri in order:
            for f in range(4):
                if f == tri.vertex or (tri, f) in tree:
                    continue
                nb, g = t.neighbor(tri, f)
                if (nb, g) in tree or (nb, g) in seen or (tri, f) in seen:
                    continue
                seen.add((tri, f))
                seen.add((nb, g))
                cross = crossings_from_root(tri) + [(tri, f)] + _invert(t, crossings_from_root(nb))
                paths.append(reduce_crossings(t, cross, cyclic=False))
        return paths

    def path_for(self, coords) -> CuspPath:
        """A closed dual path based at the root triangle in the given class."""
        combo = {}
        for w, k in zip(self.basis_words, coords):
            for idx, n in w.items():
                combo[idx] = combo.get(idx, 0) + k * n
        cross = []
        for idx in sorted(combo):
            n = combo[idx]
            if n == 0:
                continue
            c = self.fundamental[idx]
            if n < 0:
                c = _invert(self.t, c)
            cross.extend(c * abs(n))
        return crossings_to_path(self.t, reduce_crossings(self.t, cross))


def _invert(t, crossings):
    out = []
    for tri, f in reversed(crossings):
        nb, g = t.neighbor(tri, f)
        out.append((nb, g))
    return out


def reduce_crossings(t, crossings, cyclic=True):
    """Cancel immediate backtracks (also across the basepoint if ``cyclic``)."""
    out = []
    for tri, f in crossings:
        if out:
            ptri, pf = out[-1]
            nb, g = t.neighbor(ptri, pf)
            if nb == tri and g == f:
                out.pop()
                continue
        out.append((tri, f))
    while cyclic and len(out) >= 2:
        ptri, pf = out[-1]
        nb, g = t.neighbor(ptri, pf)
        if nb == out[0][0] and g == out[0][1]:
            out = out[1:-1]
        else:
            break
    return out


def crossings_to_path(t, crossings) -> CuspPath:
    if not crossings:
        raise PeripheralError("null-homotopic combination produced an empty path")
    steps = []
    for k, (tri, f_out) in enumerate(crossings):
        ptri, pf = crossings[k - 1]
        nb, g = t.neighbor(ptri, pf)
        assert nb == tri, "crossings do not chain"
        steps.append((tri.tet, tri.vertex, g, f_out))
    return CuspPath(tuple(steps))


def path_to_crossings(path: CuspPath):
    return [(CuspTriangle(t, v), fo) for (t, v, _fi, fo) in path.steps]


def _lattice_basis(vectors):
    """Row-reduce integer vectors; return a basis of their span together with
    each basis row's expression as {vector index: coefficient}."""
    rows = [list(v) for v in vectors]
    words = [{i: 1} for i in range(len(rows))]
    basis, basis_words = [], []
    ncols = len(rows[0]) if rows else 0
    col = 0
    active = list(range(len(rows)))
    while col < ncols and active:
        while True:
            nz = [i for i in active if rows[i][col] != 0]
            if not nz:
                break
            pivot = min(nz, key=lambda i: abs(rows[i][col]))
            others = [i for i in nz if i != pivot]
            if not others:
                break
            for i in others:
                q = rows[i][col] // rows[pivot][col]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[pivot])]
                w = dict(words[i])
                for k, n in words[pivot].items():
                    w[k] = w.get(k, 0) - q * n
                words[i] = {k: n for k, n in w.items() if n}
        nz = [i for i in active if rows[i][col] != 0]
        if nz:
            pivot = nz[0]
            basis.append(tuple(rows[pivot]))
            basis_words.append(words[pivot])
            active.remove(pivot)
        col += 1
    return basis, basis_words


def check_peripheral_basis(t, cusp: int, meridian: CuspPath, longitude: CuspPath):
    h = CuspHomology(t, cusp)
    n = h.intersection_number(meridian, longitude)
    if abs(n) != 1:
        raise PeripheralError(f"cusp {t.cusp_labels[cusp]}: meridian and longitude intersect {n} times algebraically, need +-1")


def first_homology(t) -> list[int]:
    """Invariant factors of H1 of the manifold (0 stands for a Z summand).

    Generators are the face pairings, relations come from the edge classes.
    """
    faces = []
    index = {}
    for tet in range(t.n_tet):
        for f in range(4):
            j, g, _ = t.glue(tet, f)
            if (j, g) in index:
                index[(tet, f)] = (index[(j, g)][0], -1)
            else:
                index[(tet, f)] = (len(faces), 1)
                faces.append((tet, f))
    # a maximal tree of the dual graph kills its generators
    seen = {0}
    queue = deque([0])
    tree = set()
    while queue:
        tet = queue.popleft()
        for f in range(4):
            j, _, _ = t.glue(tet, f)
            if j not in seen:
                seen.add(j)
                tree.add(index[(tet, f)][0])
                queue.append(j)
    rels = []
    for cls in t.edge_classes:
        rels.append(_edge_relation(t, cls, index))
    for k in tree:
        row = [0] * len(faces)
        row[k] = 1
        rels.append(row)
    m = sympy.Matrix([r + [0] * (len(faces) - len(r)) for r in rels])
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(m, domain=sympy.ZZ)
    diag = [abs(snf[i, i]) for i in range(min(snf.shape))]
    rank = sum(1 for d in diag if d != 0)
    torsion = [int(d) for d in diag if d not in (0, 1)]
    return torsion + [0] * (len(faces) - rank)


def _edge_relation(t, cls, index):
    """Walk once around an edge, recording the faces crossed."""
    row = [0] * (max(i for i, _ in index.values()) + 1)
    tet, (a, b) = cls[0]
    c, d = [x for x in range(4) if x not in (a, b)]
    start = (tet, a, b, c, d)
    cur = start
    while True:
        tet, a, b, c, d = cur
        # leave through the face opposite c, arriving across the shared face
        j, g, perm = t.glue(tet, c)
        k, s = index[(tet, c)]
        row[k] += s
        cur = (j, perm[a], perm[b], perm[d], perm[c])
        if cur == start:
            break
    return row
