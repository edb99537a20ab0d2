"""Complex scalar helpers: branch-tracked logarithms, the Bloch-Wigner
dilogarithm, and a damped least-squares Newton iteration.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

TWO_PI_I = 2j * math.pi
PI2_6 = math.pi ** 2 / 6


class NumericsError(Exception):
    pass


class DomainError(NumericsError, ValueError):
    pass


class NonConvergenceError(NumericsError):
    def __init__(self, message, residual_norm, iterations):
        super().__init__(f"{message} (residual {residual_norm:.3e} after {iterations} iterations)")
        self.residual_norm = residual_norm
        self.iterations = iterations


class SingularJacobianError(NumericsError):
    def __init__(self, condition):
        super().__init__(f"linearization is singular or ill-conditioned (condition {condition:.3e})")
        self.condition = condition


def check_finite(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite complex value {z!r}")
    return z


@dataclass(frozen=True)
class BranchedLog:
    """Principal logarithm plus an explicit number of added 2*pi*i turns."""

    value: complex
    winding: int = 0

    @property
    def total(self) -> complex:
        return self.value + TWO_PI_I * self.winding


def branched_log(z: complex, continuity_hint: BranchedLog | None = None) -> BranchedLog:
    """Logarithm of ``z``; with a hint, the 2*pi*i translate closest to it."""
    z = check_finite(z)
    if z == 0:
        raise DomainError("logarithm of zero")
    value = cmath.log(z)
    if continuity_hint is None:
        return BranchedLog(value, 0)
    target = continuity_hint.total.imag
    winding = round((target - value.imag) / (2 * math.pi))
    return BranchedLog(value, int(winding))


# Bernoulli numbers B_2, B_4, ... for the Li2 series in -log(1 - z).
def _even_bernoulli(count):
    b = [Fraction(1)]
    for m in range(1, 2 * count + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += Fraction(math.comb(m + 1, k)) * b[k]
        b.append(-acc / (m + 1))
    return [float(b[2 * k]) for k in range(1, count + 1)]


_B2K = _even_bernoulli(30)
_BERNOULLI_COEFFS = [bk / math.factorial(2 * k + 1) for k, bk in enumerate(_B2K, start=1)]


def _li2_power(z):
    total = 0j
    term = z
    k = 1
    while True:
        contrib = term / (k * k)
        total += contrib
        if abs(contrib) < 1e-17 * max(abs(total), 1e-300) or k > 200:
            return total
        k += 1
        term *= z


def _li2_bernoulli(z):
    u = -cmath.log(1 - z)
    u2 = u * u
    total = u - u2 / 4
    power = u
    for coeff in _BERNOULLI_COEFFS:
        power *= u2
        contrib = coeff * power
        total += contrib
        if abs(contrib) < 1e-18:
            break
    return total


def dilog(z: complex) -> complex:
    """Principal branch of the dilogarithm Li2."""
    z = check_finite(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(PI2_6)
    if abs(z) <= 0.5:
        return _li2_power(z)
    if abs(z) > 1:
        # inversion; the log^2(-z) term carries the branch
        return -dilog(1 / z) - PI2_6 - 0.5 * cmath.log(-z) ** 2
    if abs(1 - z) <= 0.5:
        return -dilog(1 - z) + PI2_6 - cmath.log(z) * cmath.log(1 - z)
    return _li2_bernoulli(z)


def bloch_wigner(z: complex) -> float:
    """Bloch-Wigner dilogarithm D(z) = Im Li2(z) + arg(1 - z) log|z|.

    Equals the signed hyperbolic volume of the ideal tetrahedron with
    shape ``z``.
    """
    z = check_finite(z)
    if z == 0 or z == 1:
        raise DomainError(f"Bloch-Wigner dilogarithm undefined at {z}")
    if z.imag == 0:
        return 0.0
    # D(z) = -D(1/z) keeps the evaluation inside the unit disk
    if abs(z) > 1:
        return -bloch_wigner(1 / z)
    return dilog(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def newton_solve(
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    start,
    tol: float = 1e-12,
    max_iter: int = 50,
    max_halvings: int = 30,
    max_condition: float = 1e12,
) -> np.ndarray:
    """Damped Newton iteration for complex systems, least squares when
    the system is overdetermined.

    Stops when the sup-norm of the residual drops below ``tol``.
    """
    x = np.array(start, dtype=complex)
    f = np.asarray(residual(x), dtype=complex)
    norm = _supnorm(f)
    for iteration in range(max_iter + 1):
        if norm < tol:
            return x
        if iteration == max_iter:
            break
        jac = np.asarray(jacobian(x), dtype=complex)
        step = _lstsq_step(jac, -f, max_condition)
        scale = 1.0
        for _ in range(max_halvings + 1):
            trial = x + scale * step
            try:
                f_trial = np.asarray(residual(trial), dtype=complex)
                trial_norm = _supnorm(f_trial)
            except DomainError:
                trial_norm = math.inf
            if trial_norm < norm:
                break
            scale *= 0.5
        else:
            raise NonConvergenceError("damping failed to reduce the residual", norm, iteration)
        x, f, norm = trial, f_trial, trial_norm
    raise NonConvergenceError("Newton iteration did not converge", norm, max_iter)


def _supnorm(v):
    if v.size == 0:
        return 0.0
    n = float(np.max(np.abs(v)))
    if not math.isfinite(n):
        raise DomainError("non-finite residual")
    return n


def _lstsq_step(jac, rhs, max_condition):
    if jac.size == 0:
        return np.zeros(jac.shape[1], dtype=complex)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv[-1] == 0 or sv[0] / sv[-1] > max_condition or jac.shape[0] < jac.shape[1]:
        cond = math.inf if sv[-1] == 0 else float(sv[0] / sv[-1])
        raise SingularJacobianError(cond)
    step, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
    return step
