import numpy as np
import pytest

from cuspiso.equations import ComplexLength
from cuspiso.solver import (
    REGULAR,
    DegenerationError,
    SimplexAssignment,
    UnsolvedError,
    solve_complete,
    solve_filled,
    volume,
)
from cuspiso.triangulation import CENSUS_NAMES, census

import oracles


def test_fig8_complete(fig8_complete):
    root = oracles.quadratic_roots(1, -1, 1)[0]
    assert np.max(np.abs(fig8_complete.z - root)) < 1e-12
    assert fig8_complete.geometric and not fig8_complete.warnings
    assert abs(volume(fig8_complete) - oracles.FIG8_VOLUME) < 1e-12
    assert abs(oracles.FIG8_VOLUME - 2 * oracles.regular_tet_volume()) < 1e-12


def test_napoleon_complete(napoleon_complete):
    assert np.max(np.abs(napoleon_complete.z - REGULAR)) < 1e-12
    assert abs(volume(napoleon_complete) - oracles.NAPOLEON_VOLUME) < 1e-10
    assert abs(oracles.NAPOLEON_VOLUME - 18 * oracles.regular_tet_volume()) < 1e-10


@pytest.mark.parametrize("name", CENSUS_NAMES)
def test_u_zero_at_complete(name):
    t = census(name)
    s = solve_complete(t)
    assert s.residual_norm < 1e-12
    for c in range(t.num_cusps):
        assert abs(s.meridian_u(c)) < 1e-12


def test_empty_fillings_is_complete(fig8, fig8_complete):
    s = solve_filled(fig8, {})
    assert np.array_equal(s.z, fig8_complete.z)


@pytest.mark.parametrize("pq", sorted(oracles.FIG8_FILLED))
def test_fig8_filled_volume_oracle(fig8, pq):
    s = solve_filled(fig8, {0: pq})
    assert s.geometric and s.residual_norm < 1e-12
    assert abs(s.u[0]) > 0.1
    assert abs(volume(s) - oracles.FIG8_FILLED[pq]) < 1e-10


def test_fig8_volume_oracle_is_independent():
    assert abs(oracles.fig8_filled_volume(5, 1) - oracles.FIG8_FILLED[(5, 1)]) < 1e-12


def test_fig8_volumes_increase(fig8):
    vols = [volume(solve_filled(fig8, {0: (p, 1)})) for p in (5, 6, 7)]
    assert vols[0] < vols[1] < vols[2] < oracles.FIG8_VOLUME


def test_step_count_consistency(fig8):
    a = solve_filled(fig8, {0: (5, 1)}, steps=8)
    b = solve_filled(fig8, {0: (5, 1)}, steps=64)
    assert np.max(np.abs(a.z - b.z)) < 1e-10


def test_generalized_surgery(fig8):
    s = solve_filled(fig8, {0: (7.5, 0.5)})
    assert s.geometric and s.residual_norm < 1e-12


def test_complex_length_prescribed(napoleon, napoleon_complete):
    s = solve_filled(napoleon, {"c1": ComplexLength(0.05 + 0.02j)}, hint=napoleon_complete)
    assert abs(s.meridian_u("c1") - (0.05 + 0.02j)) < 1e-12


def test_napoleon_filled(napoleon, napoleon_complete):
    s = solve_filled(napoleon, {"c1": (5, 0)}, hint=napoleon_complete)
    assert s.geometric
    assert volume(s) < oracles.NAPOLEON_VOLUME


def test_degeneration_reported(fig8):
    # small fillings leave the geometric region
    with pytest.raises((DegenerationError, UnsolvedError)) as err:
        solve_filled(fig8, {0: (1, 0)}, steps=8)
    if isinstance(err.value, DegenerationError):
        assert err.value.step is not None and err.value.total == 8


def test_assignment_domain():
    with pytest.raises(ValueError):
        SimplexAssignment.from_z(np.array([0.5 + 0.5j, 1 + 0j]))


def test_assignment_logs_consistent(napoleon_complete):
    a = napoleon_complete.assignment
    assert np.max(np.abs(np.exp(a.log_z) - a.z)) < 1e-13
    assert np.max(np.abs(np.exp(a.log_1mz) - (1 - a.z))) < 1e-13


def test_random_restarts_reproducible(fig8):
    a = solve_complete(fig8, seed=3)
    b = solve_complete(fig8, seed=3)
    assert np.array_equal(a.z, b.z)
