"""Gluing equations in logarithmic form.

A form stands for ``sum_i c_i log z_i + d_i log(1 - z_i) + pi*i*e - target``.
Corner parameters expand as::

    z          -> c += 1
    1/(1 - z)  -> d -= 1
    (z - 1)/z  -> c -= 1, d += 1, e += 1

the last using log((z-1)/z) = log(1-z) - log z + pi*i, exact for Im z > 0.

TSV dump columns: kind, label, c (comma separated), d (comma separated),
e, target_re, target_im.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import DomainError
from .triangulation import CuspPath, Triangulation, ccw_corners, edge_shape_index

TWO_PI_I = 2j * math.pi

_EXPANSION = {0: (1, 0, 0), 1: (0, -1, 0), 2: (-1, 1, 1)}


@dataclass(frozen=True)
class LogLinearForm:
    c: np.ndarray
    d: np.ndarray
    e: float
    target: complex = 0j
    kind: str = ""
    label: str = ""

    def __post_init__(self):
        c = np.asarray(self.c)
        d = np.asarray(self.d)
        if c.shape != d.shape or c.ndim != 1:
            raise ValueError("coefficient vectors must have equal length")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def n_tet(self):
        return len(self.c)

    def value(self, log_z, log_1mz) -> complex:
        """Form value without the target subtracted."""
        return complex(self.c @ log_z + self.d @ log_1mz + 1j * math.pi * self.e)

    def residual(self, log_z, log_1mz) -> complex:
        return self.value(log_z, log_1mz) - self.target

    def gradient(self, z) -> np.ndarray:
        """Derivative of the form with respect to each z_i."""
        return self.c / z - self.d / (1 - z)

    def combine(self, other: "LogLinearForm", a=1, b=1, target=None, kind="", label="") -> "LogLinearForm":
        return LogLinearForm(
            a * self.c + b * other.c,
            a * self.d + b * other.d,
            a * self.e + b * other.e,
            self.target if target is None else target,
            kind or self.kind,
            label or self.label,
        )

    def with_target(self, target) -> "LogLinearForm":
        return LogLinearForm(self.c, self.d, self.e, complex(target), self.kind, self.label)

    def is_zero(self) -> bool:
        return not np.any(self.c) and not np.any(self.d) and self.e == 0


def _empty(n):
    return np.zeros(n, dtype=int), np.zeros(n, dtype=int)


def build_edge_equations(t: Triangulation) -> list[LogLinearForm]:
    forms = []
    for k, cls in enumerate(t.edge_classes):
        c, d = _empty(t.n_tet)
        e = 0
        for tet, (a, b) in cls:
            dc, dd, de = _EXPANSION[edge_shape_index(a, b)]
            c[tet] += dc
            d[tet] += dd
            e += de
        forms.append(LogLinearForm(c, d, e, TWO_PI_I, "edge", f"e{k}"))
    return forms


def path_form(t: Triangulation, path: CuspPath, kind="cusp", label="") -> LogLinearForm:
    """Log-dilation of the holonomy along a closed dual path.

    Passing through a link triangle that pivots on corner P, the side
    vector (right end minus left end) gets multiplied by the corner
    parameter at P or its inverse, depending on the turning direction.
    """
    t.check_closed(path)
    c, d = _empty(t.n_tet)
    e = 0
    for tet, v, f_in, f_out in path.steps:
        pivot = next(x for x in range(4) if x not in (v, f_in, f_out))
        ring = ccw_corners(v)
        i = ring.index(pivot)
        nxt, prv = ring[(i + 1) % 3], ring[(i + 2) % 3]
        # leaving through the side with (pivot, f_in), entering with (pivot, f_out)
        sign = 1 if (f_in == prv and f_out == nxt) else -1
        dc, dd, de = _EXPANSION[edge_shape_index(v, pivot)]
        c[tet] += sign * dc
        d[tet] += sign * dd
        e += sign * de
    return LogLinearForm(c, d, e, 0j, kind, label)


def build_cusp_equations(t: Triangulation) -> dict[int, tuple[LogLinearForm, LogLinearForm]]:
    out = {}
    for cusp in range(t.num_cusps):
        if cusp not in t.peripheral:
            raise ValueError(f"cusp {t.cusp_labels[cusp]} has no peripheral curves")
        mer, lon = t.peripheral[cusp]
        lab = t.cusp_labels[cusp]
        out[cusp] = (path_form(t, mer, "meridian", lab), path_form(t, lon, "longitude", lab))
    return out


@dataclass(frozen=True)
class ComplexLength:
    """Prescribe the meridian log-dilation u directly instead of (p, q)."""

    u: complex


@dataclass(frozen=True)
class EquationSystem:
    """Edge forms, completeness forms of unfilled cusps, filling forms.

    ``filling_forms`` maps a filled cusp to its single replacement form; the
    target is the endpoint target (``2 pi i`` for surgeries, ``u`` for a
    prescribed complex length).
    """

    n_tet: int
    edge_forms: tuple
    cusp_forms: dict
    filling_forms: dict = field(default_factory=dict)
    meridian_forms: dict = field(default_factory=dict)

    def forms(self, scale: float = 1.0) -> list[LogLinearForm]:
        """All forms in a fixed order; filling targets scaled by ``scale``."""
        out = list(self.edge_forms)
        for cusp in sorted(self.cusp_forms):
            out.extend(self.cusp_forms[cusp])
        for cusp in sorted(self.filling_forms):
            f = self.filling_forms[cusp]
            out.append(f.with_target(f.target * scale))
        return out

    def coefficient_arrays(self, scale=1.0):
        forms = self.forms(scale)
        if not forms:
            z = np.zeros((0, self.n_tet))
            return z, z, np.zeros(0), np.zeros(0, dtype=complex)
        C = np.array([f.c for f in forms], dtype=float)
        D = np.array([f.d for f in forms], dtype=float)
        E = np.array([f.e for f in forms], dtype=float)
        T = np.array([f.target for f in forms], dtype=complex)
        return C, D, E, T

    def residual(self, log_z, log_1mz, scale=1.0) -> np.ndarray:
        C, D, E, T = self.coefficient_arrays(scale)
        return C @ log_z + D @ log_1mz + 1j * math.pi * E - T

    def jacobian(self, z, scale=1.0) -> np.ndarray:
        C, D, _, _ = self.coefficient_arrays(scale)
        return C / z[None, :] - D / (1 - z)[None, :]

    def to_tsv(self) -> str:
        rows = ["kind\tlabel\tc\td\te\ttarget_re\ttarget_im"]
        for f in self.forms():
            rows.append(
                "\t".join(
                    [
                        f.kind,
                        f.label,
                        ",".join(_fmt_num(x) for x in f.c),
                        ",".join(_fmt_num(x) for x in f.d),
                        _fmt_num(f.e),
                        repr(float(f.target.real)),
                        repr(float(f.target.imag)),
                    ]
                )
            )
        return "\n".join(rows) + "\n"


def _fmt_num(x):
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def build_filling_equations(t: Triangulation, fillings=None) -> EquationSystem:
    """Edge forms plus, per cusp, completeness or a filling condition.

    ``fillings`` maps cusp index or label to ``(p, q)`` (reals allowed for
    generalized surgery), a :class:`ComplexLength`, or ``None``.
    """
    fillings = normalize_fillings(t, fillings)
    edges = tuple(build_edge_equations(t))
    cusp = build_cusp_equations(t)
    complete = {}
    filled = {}
    for k, pair in cusp.items():
        spec = fillings.get(k)
        if spec is None:
            complete[k] = pair
        elif isinstance(spec, ComplexLength):
            filled[k] = pair[0].with_target(spec.u)
        else:
            p, q = spec
            filled[k] = pair[0].combine(pair[1], p, q, TWO_PI_I, "filling", t.cusp_labels[k])
    return EquationSystem(t.n_tet, edges, complete, filled, {k: v[0] for k, v in cusp.items()})


def normalize_fillings(t: Triangulation, fillings) -> dict:
    out = {}
    for key, spec in (fillings or {}).items():
        k = t.cusp_index(key)
        if spec is None:
            continue
        if not isinstance(spec, ComplexLength):
            p, q = spec
            if p == 0 and q == 0:
                raise DomainError("(0, 0) is not a filling")
            spec = (p, q)
        out[k] = spec
    return out


def evaluate_logs(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0) or np.any(z == 1):
        raise DomainError("simplex parameter at 0 or 1")
    return np.log(z), np.log(1 - z)
