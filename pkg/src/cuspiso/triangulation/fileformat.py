"""Reader and writer for the line-oriented ``tri v1`` triangulation format.

Example::

    tri v1
    name fig8
    tetrahedra 2
    glue 0 0 -> 1 1 1032
    ...
    cusps 1
    cusp k0 : (0,0) (0,1) ...
    meridian k0 : (0,0,1,2) (1,3,0,2) ...
    longitude k0 : ...

Edge classes and cusp links are always rederived; declared cusp vertex
lists are only cross-checked.
"""
from __future__ import annotations

import re

from .core import CuspPath, GluingError, LinkError, Triangulation, TriangulationError

MAGIC = "tri v1"


class TriSyntaxError(TriangulationError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UngluedFaceError(GluingError):
    pass


_GLUE = re.compile(r"glue (\d+) ([0-3]) -> (\d+) ([0-3]) ([0-3]{4})$")
_TUPLE = re.compile(r"\(([^()]*)\)")


def _ints(body, lineno, col, count):
    parts = body.split(",")
    if len(parts) != count:
        raise TriSyntaxError(f"expected {count} integers in ({body})", lineno, col)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise TriSyntaxError(f"non-integer entry in ({body})", lineno, col) from None


def _tuples(rest, lineno, offset, count):
    out = []
    pos = 0
    rest_stripped = rest.strip()
    lead = len(rest) - len(rest.lstrip())
    for m in _TUPLE.finditer(rest_stripped):
        gap = rest_stripped[pos:m.start()]
        if gap.strip():
            raise TriSyntaxError(f"unexpected text {gap.strip()!r}", lineno, offset + lead + pos + 1)
        out.append(_ints(m.group(1), lineno, offset + lead + m.start() + 1, count))
        pos = m.end()
    if rest_stripped[pos:].strip():
        raise TriSyntaxError(f"unexpected text {rest_stripped[pos:].strip()!r}", lineno, offset + lead + pos + 1)
    return out


def parse_triangulation(text) -> Triangulation:
    """Parse ``tri v1`` text (str or bytes) into a validated Triangulation."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            lines.append((lineno, body))
    if not lines or lines[0][1].strip() != MAGIC:
        ln = lines[0][0] if lines else 1
        raise TriSyntaxError(f"first line must be {MAGIC!r}", ln)

    name = ""
    n_tet = None
    gluings = {}
    declared_cusps = None
    cusp_vertices = {}
    curves = {}
    for lineno, body in lines[1:]:
        head = body.split(" ", 1)[0]
        if head == "name":
            name = body[5:].strip()
        elif head == "tetrahedra":
            try:
                n_tet = int(body.split()[1])
            except (IndexError, ValueError):
                raise TriSyntaxError("expected 'tetrahedra <n>'", lineno, 12) from None
        elif head == "glue":
            m = _GLUE.match(body.strip())
            if not m:
                raise TriSyntaxError("expected 'glue <i> <f> -> <j> <g> <p0p1p2p3>'", lineno)
            i, f, j, g = (int(m.group(k)) for k in range(1, 5))
            perm = tuple(int(ch) for ch in m.group(5))
            if sorted(perm) != [0, 1, 2, 3]:
                raise TriSyntaxError(f"{m.group(5)} is not a permutation", lineno, m.start(5) + 1)
            if perm[f] != g:
                raise GluingError(f"line {lineno}: permutation {m.group(5)} does not carry face {f} to face {g}")
            inv = [0] * 4
            for k, v in enumerate(perm):
                inv[v] = k
            for key, val in (((i, f), (j, tuple(perm))), ((j, g), (i, tuple(inv)))):
                if key in gluings and gluings[key] != val:
                    raise GluingError(f"line {lineno}: face {key} glued inconsistently (non-involutive gluing)")
                gluings[key] = val
        elif head == "cusps":
            try:
                declared_cusps = int(body.split()[1])
            except (IndexError, ValueError):
                raise TriSyntaxError("expected 'cusps <k>'", lineno, 7) from None
        elif head in ("cusp", "meridian", "longitude"):
            if " : " not in body:
                raise TriSyntaxError(f"expected '{head} <label> : ...'", lineno)
            left, rest = body.split(" : ", 1)
            parts = left.split()
            if len(parts) != 2:
                raise TriSyntaxError("missing cusp label", lineno, len(head) + 2)
            label = parts[1]
            offset = len(left) + 3
            if head == "cusp":
                cusp_vertices[label] = _tuples(rest, lineno, offset, 2)
            else:
                steps = _tuples(rest, lineno, offset, 4)
                curves.setdefault(label, {})[head] = CuspPath(tuple(steps))
        else:
            raise TriSyntaxError(f"unknown directive {head!r}", lineno)

    if n_tet is None:
        raise TriSyntaxError("missing 'tetrahedra' line", lines[-1][0])
    for t in range(n_tet):
        for f in range(4):
            if (t, f) not in gluings:
                raise UngluedFaceError(f"face {f} of tetrahedron {t} is not glued")
    for (t, f) in gluings:
        if not 0 <= t < n_tet:
            raise GluingError(f"gluing refers to tetrahedron {t} but only {n_tet} declared")
    rows = tuple(tuple(gluings[(t, f)] for f in range(4)) for t in range(n_tet))
    base = Triangulation(rows, name=name)

    if declared_cusps is not None and declared_cusps != base.num_cusps:
        raise LinkError(f"file declares {declared_cusps} cusps, gluings give {base.num_cusps}")
    labels = [None] * base.num_cusps
    for label, verts in cusp_vertices.items():
        found = {base.cusp_of(t, v) for (t, v) in verts}
        if len(found) != 1:
            raise LinkError(f"cusp {label} lists vertices from different cusps")
        c = found.pop()
        if sorted(verts) != sorted((x.tet, x.vertex) for x in base.cusp_triangles(c)):
            raise LinkError(f"cusp {label} vertex list does not match the derived cusp")
        if labels[c] is not None:
            raise LinkError(f"cusp {label} duplicates cusp {labels[c]}")
        labels[c] = label
    if cusp_vertices and None in labels:
        raise LinkError("not every cusp is declared")
    if not cusp_vertices:
        labels = list(base.cusp_labels)
    peripheral = {}
    for label, pair in curves.items():
        if label not in labels:
            raise LinkError(f"peripheral curves for undeclared cusp {label}")
        if set(pair) != {"meridian", "longitude"}:
            raise LinkError(f"cusp {label} needs both meridian and longitude")
        peripheral[labels.index(label)] = (pair["meridian"], pair["longitude"])
    return base.with_peripheral(peripheral, cusp_labels=labels)


def serialize_triangulation(t: Triangulation) -> str:
    out = [MAGIC, f"name {t.name}", f"tetrahedra {t.n_tet}"]
    for i in range(t.n_tet):
        for f in range(4):
            j, g, perm = t.glue(i, f)
            if (i, f) <= (j, g):
                out.append(f"glue {i} {f} -> {j} {g} {''.join(str(p) for p in perm)}")
    out.append(f"cusps {t.num_cusps}")
    for c in range(t.num_cusps):
        verts = " ".join(f"({x.tet},{x.vertex})" for x in t.cusp_triangles(c))
        out.append(f"cusp {t.cusp_labels[c]} : {verts}")
    for c in range(t.num_cusps):
        if c not in t.peripheral:
            continue
        for kind, path in zip(("meridian", "longitude"), t.peripheral[c]):
            steps = " ".join(f"({a},{b},{d},{e})" for (a, b, d, e) in path.steps)
            out.append(f"{kind} {t.cusp_labels[c]} : {steps}")
    return "\n".join(out) + "\n"
