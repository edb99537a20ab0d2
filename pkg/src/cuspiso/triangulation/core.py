"""Combinatorial ideal triangulations and their cusp links.

Tetrahedron vertices are 0..3 and face ``f`` is the face opposite vertex
``f``.  A gluing of ``(tet, face)`` is a target tetrahedron plus a
permutation ``perm`` of {0,1,2,3}; the target face is ``perm[face]`` and
vertex ``k`` of ``tet`` is identified with vertex ``perm[k]`` of the target.

All tetrahedra are positively oriented, which forces every gluing
permutation to be odd.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

EDGE_PAIRS = tuple(itertools.combinations(range(4), 2))

# Even permutations (v, a, b, c): seen from the cusp at v the corners at
# edges va, vb, vc run counterclockwise.
_CCW = {}
for _p in itertools.permutations(range(4)):
    if sum(1 for i, j in itertools.combinations(range(4), 2) if _p[i] > _p[j]) % 2 == 0:
        _CCW.setdefault(_p[0], _p[1:])


class TriangulationError(ValueError):
    pass


class GluingError(TriangulationError):
    pass


class LinkError(TriangulationError):
    pass


class PeripheralError(TriangulationError):
    pass


def ccw_corners(vertex: int) -> tuple[int, int, int]:
    """The other three vertices, counterclockwise as seen from ``vertex``."""
    return _CCW[vertex]


def edge_shape_index(a: int, b: int) -> int:
    """Which corner parameter sits at tet-edge ab.

    0 -> z on {01, 23}, 1 -> 1/(1-z) on {02, 13}, 2 -> (z-1)/z on {03, 12}.
    """
    pair = frozenset((a, b))
    if pair in (frozenset((0, 1)), frozenset((2, 3))):
        return 0
    if pair in (frozenset((0, 2)), frozenset((1, 3))):
        return 1
    return 2


def perm_sign(perm) -> int:
    s = 1
    for i, j in itertools.combinations(range(4), 2):
        if perm[i] > perm[j]:
            s = -s
    return s


def perm_inverse(perm):
    inv = [0] * 4
    for k, v in enumerate(perm):
        inv[v] = k
    return tuple(inv)


@dataclass(frozen=True, order=True)
class CuspTriangle:
    tet: int
    vertex: int


@dataclass(frozen=True)
class CuspPath:
    """Closed path in the dual 1-skeleton of a cusp triangulation.

    Each step is ``(tet, vertex, e_in, e_out)``: the path enters the link
    triangle cut from ``vertex`` of ``tet`` through the side lying in face
    ``e_in`` and leaves through the side in face ``e_out``.
    """

    steps: tuple[tuple[int, int, int, int], ...]

    def __len__(self):
        return len(self.steps)

    def reversed(self) -> "CuspPath":
        return CuspPath(tuple((t, v, fo, fi) for (t, v, fi, fo) in reversed(self.steps)))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class Triangulation:
    """Validated ideal triangulation with labelled cusps and peripheral curves.

    ``gluings[t][f] = (target_tet, perm)``.  ``peripheral`` maps a cusp index
    to its ``(meridian, longitude)`` pair; it may be empty for an
    intermediate object that has not had curves attached yet.
    """

    gluings: tuple
    cusp_labels: tuple[str, ...] | None = None
    peripheral: dict = field(default_factory=dict, compare=False)
    name: str = field(default="", compare=False)
    check_links: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        gl = tuple(tuple((int(j), tuple(int(x) for x in p)) for (j, p) in row) for row in self.gluings)
        object.__setattr__(self, "gluings", gl)
        self._validate_gluings()
        n = self.num_cusps
        if self.cusp_labels is None:
            object.__setattr__(self, "cusp_labels", tuple(f"k{i}" for i in range(n)))
        if len(self.cusp_labels) != n:
            raise LinkError(f"{len(self.cusp_labels)} cusp labels given for {n} cusps")
        if len(set(self.cusp_labels)) != n:
            raise LinkError("duplicate cusp labels")
        if self.check_links:
            for c in range(n):
                chi = self.link_euler_characteristic(c)
                if chi != 0:
                    raise LinkError(f"cusp {self.cusp_labels[c]} link has Euler characteristic {chi}, not a torus")
        for c, curves in self.peripheral.items():
            if not 0 <= c < n:
                raise PeripheralError(f"peripheral curves given for unknown cusp {c}")
            for path in curves:
                self.check_closed(path, c)
        if self.peripheral:
            from .homology import check_peripheral_basis

            for c, (mer, lon) in self.peripheral.items():
                check_peripheral_basis(self, c, mer, lon)

    @property
    def n_tet(self) -> int:
        return len(self.gluings)

    def _validate_gluings(self):
        n = len(self.gluings)
        for t, row in enumerate(self.gluings):
            if len(row) != 4:
                raise GluingError(f"tetrahedron {t} has {len(row)} faces listed")
            for f, (j, perm) in enumerate(row):
                if not 0 <= j < n:
                    raise GluingError(f"face ({t},{f}) glued to missing tetrahedron {j}")
                if sorted(perm) != [0, 1, 2, 3]:
                    raise GluingError(f"face ({t},{f}) has invalid vertex map {perm}")
                g = perm[f]
                back_tet, back_perm = self.gluings[j][g]
                if back_tet != t or back_perm != perm_inverse(perm):
                    raise GluingError(f"gluing of face ({t},{f}) -> ({j},{g}) is not involutive")
                if (j, g) == (t, f):
                    raise GluingError(f"face ({t},{f}) glued to itself")
                if perm_sign(perm) != -1:
                    raise GluingError(f"gluing of face ({t},{f}) reverses orientation")

    def glue(self, tet: int, face: int):
        """Return ``(target_tet, target_face, perm)``."""
        j, perm = self.gluings[tet][face]
        return j, perm[face], perm

    # -- edge classes -------------------------------------------------
    @cached_property
    def _edge_data(self):
        uf = _UnionFind([(t, e) for t in range(self.n_tet) for e in EDGE_PAIRS])
        for t in range(self.n_tet):
            for f in range(4):
                j, _, perm = self.glue(t, f)
                for a, b in EDGE_PAIRS:
                    if f in (a, b):
                        continue
                    uf.union((t, (a, b)), (j, tuple(sorted((perm[a], perm[b])))))
        index = {}
        classes = []
        for t in range(self.n_tet):
            for e in EDGE_PAIRS:
                r = uf.find((t, e))
                if r not in index:
                    index[r] = len(classes)
                    classes.append([])
                classes[index[r]].append((t, e))
        return {(t, e): index[uf.find((t, e))] for t in range(self.n_tet) for e in EDGE_PAIRS}, classes

    @property
    def edge_classes(self) -> list[list[tuple[int, tuple[int, int]]]]:
        return self._edge_data[1]

    def edge_class_of(self, tet: int, a: int, b: int) -> int:
        return self._edge_data[0][(tet, tuple(sorted((a, b))))]

    # -- cusps --------------------------------------------------------
    @cached_property
    def _cusp_data(self):
        uf = _UnionFind([(t, v) for t in range(self.n_tet) for v in range(4)])
        for t in range(self.n_tet):
            for f in range(4):
                j, _, perm = self.glue(t, f)
                for v in range(4):
                    if v != f:
                        uf.union((t, v), (j, perm[v]))
        index = {}
        classes = []
        for t in range(self.n_tet):
            for v in range(4):
                r = uf.find((t, v))
                if r not in index:
                    index[r] = len(classes)
                    classes.append([])
                classes[index[r]].append(CuspTriangle(t, v))
        return {(t, v): index[uf.find((t, v))] for t in range(self.n_tet) for v in range(4)}, classes

    @property
    def num_cusps(self) -> int:
        return len(self._cusp_data[1])

    def cusp_of(self, tet: int, vertex: int) -> int:
        return self._cusp_data[0][(tet, vertex)]

    def cusp_triangles(self, cusp: int) -> list[CuspTriangle]:
        return list(self._cusp_data[1][cusp])

    def cusp_index(self, cusp) -> int:
        """Accept a cusp index or label."""
        if isinstance(cusp, str):
            try:
                return self.cusp_labels.index(cusp)
            except ValueError:
                raise KeyError(f"unknown cusp {cusp!r}; cusps are {', '.join(self.cusp_labels)}") from None
        if not 0 <= cusp < self.num_cusps:
            raise IndexError(f"cusp index {cusp} out of range")
        return int(cusp)

    # -- link structure -----------------------------------------------
    def neighbor(self, tri: CuspTriangle, face: int) -> tuple[CuspTriangle, int]:
        """Link triangle across the side of ``tri`` lying in ``face``, and
        the face through which that side is entered."""
        j, g, perm = self.glue(tri.tet, face)
        return CuspTriangle(j, perm[tri.vertex]), g

    def corner_classes(self, cusp: int) -> dict:
        """Map each corner ``(tet, vertex, other)`` of the cusp's link to a
        link-vertex id (an end of an edge class)."""
        tris = self.cusp_triangles(cusp)
        corners = [(tr.tet, tr.vertex, a) for tr in tris for a in range(4) if a != tr.vertex]
        uf = _UnionFind(corners)
        for t, v, a in corners:
            for f in range(4):
                if f in (v, a):
                    continue
                j, _, perm = self.glue(t, f)
                uf.union((t, v, a), (j, perm[v], perm[a]))
        ids = {}
        out = {}
        for c in corners:
            r = uf.find(c)
            out[c] = ids.setdefault(r, len(ids))
        return out

    def link_euler_characteristic(self, cusp: int) -> int:
        faces = len(self.cusp_triangles(cusp))
        verts = len(set(self.corner_classes(cusp).values()))
        edges = 3 * faces // 2
        return verts - edges + faces

    def check_closed(self, path: CuspPath, cusp: int | None = None):
        """Raise PeripheralError unless ``path`` is a closed dual path."""
        steps = path.steps
        if not steps:
            raise PeripheralError("empty peripheral path")
        for k, (t, v, fi, fo) in enumerate(steps):
            if not (0 <= t < self.n_tet) or len({v, fi, fo}) != 3 or not all(0 <= x < 4 for x in (v, fi, fo)):
                raise PeripheralError(f"step {k} {steps[k]} is not a valid crossing of a link triangle")
            if cusp is not None and self.cusp_of(t, v) != cusp:
                raise PeripheralError(f"step {k} leaves cusp {cusp}")
            nxt = steps[(k + 1) % len(steps)]
            tri, entry = self.neighbor(CuspTriangle(t, v), fo)
            if (tri.tet, tri.vertex, entry) != (nxt[0], nxt[1], nxt[2]):
                raise PeripheralError(f"peripheral path is open between steps {k} and {(k + 1) % len(steps)}")

    def with_peripheral(self, peripheral: dict, cusp_labels=None, name=None) -> "Triangulation":
        return Triangulation(
            self.gluings,
            cusp_labels=tuple(cusp_labels) if cusp_labels is not None else self.cusp_labels,
            peripheral=dict(peripheral),
            name=self.name if name is None else name,
            check_links=self.check_links,
        )

    def structurally_equal(self, other: "Triangulation") -> bool:
        return (
            self.gluings == other.gluings
            and self.cusp_labels == other.cusp_labels
            and self.peripheral == other.peripheral
        )
