"""Built-in triangulations.

The shipped ``data/*.tri`` files are produced by :func:`build_entry`
(see ``scripts/build_census.py``); each construction is certified before it
is written.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from importlib import resources

from .core import GluingError, LinkError, Triangulation, perm_sign
from .fileformat import parse_triangulation
from .homology import CuspHomology, first_homology

CENSUS_NAMES = ("fig8", "fig8_sister", "napoleon")


class CensusLookupError(KeyError):
    def __str__(self):
        return self.args[0]


@lru_cache(maxsize=None)
def census(name: str) -> Triangulation:
    if name not in CENSUS_NAMES:
        raise CensusLookupError(f"unknown census entry {name!r}; available: {', '.join(CENSUS_NAMES)}")
    text = resources.files("cuspiso.data").joinpath(f"{name}.tri").read_text(encoding="utf-8")
    return parse_triangulation(text)


# -- constructions ------------------------------------------------------

def _odd_perms_taking(f, g):
    for p in itertools.permutations(range(4)):
        if p[f] == g and perm_sign(p) == -1:
            yield p


def _matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        for m in _matchings(rest[:k] + rest[k + 1:]):
            yield [(first, other)] + m


def two_tetrahedron_candidates():
    """All consistently oriented one-cusped 2-tetrahedron triangulations whose
    two edges both have degree 6, in a fixed enumeration order."""
    faces = [(t, f) for t in range(2) for f in range(4)]
    for matching in _matchings(faces):
        options = [list(_odd_perms_taking(a[1], b[1])) for a, b in matching]
        for perms in itertools.product(*options):
            rows = [[None] * 4 for _ in range(2)]
            for ((i, f), (j, g)), p in zip(matching, perms):
                inv = [0] * 4
                for k, v in enumerate(p):
                    inv[v] = k
                rows[i][f] = (j, p)
                rows[j][g] = (i, tuple(inv))
            try:
                t = Triangulation(tuple(tuple(r) for r in rows))
            except (GluingError, LinkError):
                continue
            if t.num_cusps == 1 and sorted(len(c) for c in t.edge_classes) == [6, 6]:
                yield t


def build_fig8_gluing(sister=False) -> Triangulation:
    """First candidate with H1 = Z (the knot complement), or with torsion
    Z/5 for the sister manifold."""
    want = [5, 0] if sister else [0]
    for t in two_tetrahedron_candidates():
        if first_homology(t) == want:
            return Triangulation(t.gluings, cusp_labels=("k0",), name="fig8_sister" if sister else "fig8")
    raise LookupError("no two-tetrahedron triangulation with the requested homology")


# Lattice points a + b*w, w = exp(i pi/3); the three colour classes
# (a - b) mod 3 are: 0 -> cusps c1..c3 (hexagon centres), 1 -> d2, 2 -> d3.
def _colour(p):
    return (p[0] - p[1]) % 3


def build_napoleon_gluing(lattice=(3, 3, 0), bottom="preserve") -> Triangulation:
    """18 tetrahedra over the unit triangular lattice modulo a sublattice.

    ``lattice = (n1, n2, s)`` is the sublattice spanned by n1 and s + n2*w
    in lattice coordinates.  Each lattice triangle is a tetrahedron with
    vertex 0 at infinity (cusp d1).  Vertical faces glue across lattice
    neighbours.  The face opposite infinity glues to the point-reflected
    triangle in the hexagon around its colour-0 vertex (opposite sides of
    the hexagon), either preserving or swapping the other two colours.
    """
    n1, n2, sh = lattice

    def red(p):
        k = p[1] // n2
        return ((p[0] - k * sh) % n1, p[1] - k * n2)

    tris = []
    for a in range(n1):
        for b in range(n2):
            tris.append([(a, b), (a + 1, b), (a, b + 1)])
            tris.append([(a + 1, b), (a + 1, b + 1), (a, b + 1)])
    tets = []
    for tri in tris:
        k = [_colour(p) for p in tri].index(0)
        tets.append(tri[k:] + tri[:k])
    lookup = {frozenset(red(p) for p in tri): i for i, tri in enumerate(tets)}
    if len(lookup) != len(tets):
        raise ValueError("lattice too small; triangles coincide in the quotient")
    rows = []
    for i, tri in enumerate(tets):
        row = [None] * 4
        for f in (1, 2, 3):
            a, b = [tri[v - 1] for v in (1, 2, 3) if v != f]
            c = tri[f - 1]
            d = (a[0] + b[0] - c[0], a[1] + b[1] - c[1])
            j = lookup[frozenset(map(red, (a, b, d)))]
            target = [red(p) for p in tets[j]]
            perm = [0] * 4
            for v in (1, 2, 3):
                perm[v] = 1 + target.index(red(tri[v - 1]) if v != f else red(d))
            row[f] = (j, tuple(perm))
        centre = tri[0]
        refl = [(2 * centre[0] - p[0], 2 * centre[1] - p[1]) for p in tri]
        j = lookup[frozenset(map(red, refl))]
        colours = [_colour(p) for p in tets[j]]
        mates = [_colour(tri[v - 1]) for v in (2, 3)]
        if bottom == "swap":
            mates = mates[::-1]
        row[0] = (j, (0, 1) + tuple(1 + colours.index(m) for m in mates))
        rows.append(tuple(row))
    t = Triangulation(tuple(rows), check_links=False)
    if t.num_cusps != 6:
        raise LinkError(f"construction gives {t.num_cusps} cusps, expected 6")
    t = Triangulation(t.gluings)
    # vertex 0 of every tet is d1; colour 0 splits into c1, c2, c3
    labels = [None] * t.num_cusps
    labels[t.cusp_of(0, 0)] = "d1"
    centres = sorted({red(tri[0]) for tri in tets})
    for k, centre in enumerate(centres):
        i = next(i for i, tri in enumerate(tets) if red(tri[0]) == centre)
        labels[t.cusp_of(i, 1)] = f"c{k + 1}"
    for i, tri in enumerate(tets):
        for v in (2, 3):
            labels[t.cusp_of(i, v)] = f"d{1 + _colour(tri[v - 1])}"
    if None in labels or len(set(labels)) != 6:
        raise LinkError("cusps do not split into c1..c3, d1..d3")
    return Triangulation(t.gluings, cusp_labels=tuple(labels), name="napoleon")


def napoleon_variants():
    """The finite set of discrete choices left open by the recipe: the
    colour-preserving index-9 sublattices, and the bottom vertex matching."""
    lattices = [(3, 3, 0)] + [(9, 1, s) for s in (1, 4, 7)]
    for lat in lattices:
        for bottom in ("preserve", "swap"):
            yield lat, bottom


def attach_combinatorial_peripheral(t: Triangulation) -> Triangulation:
    """Attach some homology basis as meridian/longitude on every cusp."""
    peripheral = {}
    for c in range(t.num_cusps):
        h = CuspHomology(t, c)
        peripheral[c] = (h.path_for((1, 0)), h.path_for((0, 1)))
    return t.with_peripheral(peripheral)


def normalize_peripheral(t: Triangulation, structure=None) -> Triangulation:
    """Re-choose meridian/longitude so that longitude/meridian at the complete
    structure is already in the standard fundamental domain."""
    from ..cusps import holonomy_translations, reduce_modulus
    from ..solver import solve_complete

    t = attach_combinatorial_peripheral(t)
    s = structure or solve_complete(t)
    peripheral = {}
    for c in range(t.num_cusps):
        h = CuspHomology(t, c)
        m_tr, l_tr = holonomy_translations(s, c)
        tau = l_tr / m_tr
        lsign = 1 if tau.imag > 0 else -1
        _, ((a, b), (cc, d)) = reduce_modulus(lsign * tau)
        mer = (d, cc * lsign)
        lon = (b, a * lsign)
        peripheral[c] = (h.path_for(mer), h.path_for(lon))
    return t.with_peripheral(peripheral)


class CertificationError(RuntimeError):
    pass


def certify(t: Triangulation, *, regular=True, hexagonal=None, homology=None, tol=1e-10):
    """Check a census candidate; raise CertificationError with the reason."""
    import cmath
    import math

    from ..cusps import cusp_shapes
    from ..solver import REGULAR, solve_complete

    if homology is not None and first_homology(t) != list(homology):
        raise CertificationError(f"H1 is {first_homology(t)}, expected {list(homology)}")
    s = solve_complete(t)
    if not s.geometric:
        raise CertificationError("complete structure is not geometric")
    if regular and max(abs(z - REGULAR) for z in s.z) > tol:
        raise CertificationError("complete structure is not all-regular")
    shapes = cusp_shapes(s)
    hexagon = cmath.exp(1j * math.pi / 3)
    for label in hexagonal or ():
        if abs(shapes[label].reduced - hexagon) > tol:
            raise CertificationError(f"cusp {label} is not hexagonal: {shapes[label].reduced}")
    return s


def build_entry(name: str) -> Triangulation:
    """Construct, certify and normalize a census entry from scratch."""
    if name in ("fig8", "fig8_sister"):
        t = build_fig8_gluing(sister=(name == "fig8_sister"))
        t = normalize_peripheral(t)
        certify(t, homology=[5, 0] if name == "fig8_sister" else [0])
        return t
    if name == "napoleon":
        reasons = []
        for lat, bottom in napoleon_variants():
            try:
                t = build_napoleon_gluing(lat, bottom)
                if sorted(len(t.cusp_triangles(c)) for c in range(6)) != [6, 6, 6, 18, 18, 18]:
                    raise CertificationError("cusp triangle counts differ from 6,6,6,18,18,18")
                t = normalize_peripheral(t)
                certify(t, hexagonal=t.cusp_labels, homology=[0] * 6)
            except (CertificationError, GluingError, LinkError, ValueError) as exc:
                reasons.append(f"{lat}/{bottom}: {exc}")
                continue
            return t
        raise CertificationError("no napoleon variant certified: " + "; ".join(reasons))
    raise CensusLookupError(f"no construction for {name!r}")
