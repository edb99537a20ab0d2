"""Shape solutions of gluing equations: complete structures and Dehn
fillings reached by continuation from them."""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .equations import ComplexLength, EquationSystem, build_filling_equations, normalize_fillings
from .numerics import (
    BranchedLog,
    DomainError,
    NonConvergenceError,
    NumericsError,
    SingularJacobianError,
    bloch_wigner,
    branched_log,
    newton_solve,
)
from .triangulation import Triangulation

log = logging.getLogger(__name__)

REGULAR = cmath.exp(1j * math.pi / 3)
TOL = 1e-12
DEGENERATION = 1e-9
DEFAULT_SEED = 20020101


class SolverError(Exception):
    pass


class UnsolvedError(SolverError):
    pass


class DegenerationError(SolverError):
    def __init__(self, message, step=None, total=None, z=None):
        super().__init__(message)
        self.step = step
        self.total = total
        self.z = z


@dataclass(frozen=True)
class SimplexAssignment:
    z: np.ndarray
    logs: tuple

    @classmethod
    def from_z(cls, z, hint: "SimplexAssignment | None" = None) -> "SimplexAssignment":
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0) or np.any(z == 1):
            raise DomainError("simplex parameter at 0 or 1")
        logs = []
        for i, zi in enumerate(z):
            h1 = h2 = None
            if hint is not None:
                h1, h2 = hint.logs[i]
            logs.append((branched_log(zi, h1), branched_log(1 - zi, h2)))
        return cls(z, tuple(logs))

    @property
    def log_z(self) -> np.ndarray:
        return np.array([a.total for a, _ in self.logs])

    @property
    def log_1mz(self) -> np.ndarray:
        return np.array([b.total for _, b in self.logs])

    @property
    def geometric(self) -> bool:
        return bool(np.all(self.z.imag > 0))


@dataclass(frozen=True)
class SolvedStructure:
    triangulation: Triangulation
    assignment: SimplexAssignment
    system: EquationSystem
    residual_norm: float
    u: dict
    geometric: bool
    fillings: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def z(self) -> np.ndarray:
        return self.assignment.z

    def meridian_u(self, cusp) -> complex:
        k = self.triangulation.cusp_index(cusp)
        form = self.system.meridian_forms[k]
        return form.value(self.assignment.log_z, self.assignment.log_1mz)


def _residual_fn(system: EquationSystem, hint: SimplexAssignment | None, offset=None):
    def residual(z):
        a = SimplexAssignment.from_z(z, hint)
        r = system.residual(a.log_z, a.log_1mz)
        return r if offset is None else r - offset

    return residual


def _jacobian_fn(system: EquationSystem):
    return system.jacobian


def _finish(t, system, assignment, fillings, warnings=()):
    r = system.residual(assignment.log_z, assignment.log_1mz)
    norm = float(np.max(np.abs(r))) if r.size else 0.0
    u = {k: system.meridian_forms[k].value(assignment.log_z, assignment.log_1mz) for k in system.filling_forms}
    return SolvedStructure(t, assignment, system, norm, u, assignment.geometric, dict(fillings), tuple(warnings))


def solve_complete(t: Triangulation, restarts: int = 10, seed: int = DEFAULT_SEED, tol: float = TOL) -> SolvedStructure:
    """Complete structure by Newton from the all-regular shape, then from
    seeded random starts in the upper half-plane."""
    system = build_filling_equations(t, None)
    starts = [np.full(t.n_tet, REGULAR)]
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append(rng.uniform(-0.5, 1.5, t.n_tet) + 1j * rng.uniform(0.2, 1.5, t.n_tet))
    failures = []
    fallback = None
    for k, start in enumerate(starts):
        try:
            z = newton_solve(_residual_fn(system, None), _jacobian_fn(system), start, tol=tol)
        except NumericsError as exc:
            failures.append(f"start {k}: {exc}")
            continue
        a = SimplexAssignment.from_z(z)
        if a.geometric:
            return _finish(t, system, a, {})
        if fallback is None:
            fallback = a
    if fallback is not None:
        msg = "converged only to a non-geometric solution"
        log.warning("%s: %s", t.name, msg)
        return _finish(t, system, fallback, {}, [msg])
    raise UnsolvedError(f"{t.name}: no start converged; " + "; ".join(failures[:3]))


def solve_filled(
    t: Triangulation,
    fillings=None,
    hint: SolvedStructure | None = None,
    steps: int | None = None,
    max_steps: int = 256,
    tol: float = TOL,
) -> SolvedStructure:
    """Filled (or complex-length prescribed) structure by continuation.

    The homotopy moves the residual targets linearly from their values at
    the starting structure to the requested ones; from the complete
    structure this is the ray of coefficients (p/s, q/s), s from 0 to 1.
    With ``steps`` fixed no step doubling is attempted.
    """
    fillings = normalize_fillings(t, fillings)
    if not fillings and hint is None:
        return solve_complete(t, tol=tol)
    system = build_filling_equations(t, fillings)
    base = hint if hint is not None else solve_complete(t, tol=tol)
    start = base.assignment
    offset = system.residual(start.log_z, start.log_1mz)
    n = steps or 8
    last_error = None
    while True:
        try:
            a = _continue(system, start, offset, n, tol)
            return _finish(t, system, a, fillings)
        except (NonConvergenceError, SingularJacobianError, DomainError) as exc:
            last_error = exc
            if steps is not None or n >= max_steps:
                break
            n *= 2
    raise UnsolvedError(f"{t.name}: continuation failed with {n} steps: {last_error}")


def _continue(system, start: SimplexAssignment, offset, n, tol):
    current = start
    previous = None
    for k in range(1, n + 1):
        s = k / n
        guess = current.z if previous is None else 2 * current.z - previous.z
        residual = _residual_fn(system, current, (1 - s) * offset)
        try:
            z = newton_solve(residual, _jacobian_fn(system), guess, tol=tol)
        except NumericsError:
            if previous is None:
                raise
            z = newton_solve(residual, _jacobian_fn(system), current.z, tol=tol)
        nxt = SimplexAssignment.from_z(z, current)
        bad = np.flatnonzero((z.imag < DEGENERATION) | (np.abs(z) < DEGENERATION) | (np.abs(1 - z) < DEGENERATION))
        if bad.size:
            raise DegenerationError(
                f"tetrahedra {bad.tolist()} degenerate at continuation step {k}/{n}", step=k, total=n, z=z
            )
        previous, current = current, nxt
    return current


def volume(s: SolvedStructure) -> float:
    return float(sum(bloch_wigner(z) for z in s.z))


__all__ = [
    "BranchedLog",
    "ComplexLength",
    "DegenerationError",
    "SimplexAssignment",
    "SolvedStructure",
    "SolverError",
    "UnsolvedError",
    "solve_complete",
    "solve_filled",
    "volume",
]
