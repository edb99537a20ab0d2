"""Induced triangulation of a cusp torus."""
from __future__ import annotations

from .core import CuspTriangle, Triangulation


def cusp_link(t: Triangulation, cusp) -> tuple[list[CuspTriangle], dict]:
    """Link triangles of ``cusp`` and their side pairing.

    The pairing maps ``(triangle, face)`` to ``(neighbour, face)`` for every
    side of every triangle.
    """
    c = t.cusp_index(cusp)
    tris = t.cusp_triangles(c)
    adjacency = {}
    for tri in tris:
        for f in range(4):
            if f != tri.vertex:
                adjacency[(tri, f)] = t.neighbor(tri, f)
    return tris, adjacency
