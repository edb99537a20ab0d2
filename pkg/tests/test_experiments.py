import json

import pytest

from cuspiso.experiments import (
    ExperimentError,
    check_brunnian,
    first_order_derivative,
    report_dict,
    run_isolation,
    to_csv,
    to_json,
)
from cuspiso.triangulation import CensusLookupError

LIGHT = ("d1", "d2", "d3")


def test_single_fill_isolates_dark_cusps():
    r = run_isolation("napoleon", [("c1", 5, 0)])
    assert set(r.observed) == {"c2", "c3", *LIGHT}
    assert r.deltas["c2"] < 1e-9 and r.deltas["c3"] < 1e-9
    assert max(r.deltas[d] for d in LIGHT) > 1e-4
    assert r.volume_after < r.volume_before


def test_double_fill_moves_third():
    r = run_isolation("napoleon", [("c1", 5, 0), ("c2", 5, 0)], ["c3"])
    assert r.deltas["c3"] > 1e-6
    assert not r.isolated


@pytest.mark.parametrize("name", ["fig8", "napoleon"])
def test_empty_fill_exact_zero(name):
    r = run_isolation(name, [])
    assert all(v == 0.0 for v in r.deltas.values())
    assert r.isolated


def test_observing_filled_cusp_rejected():
    with pytest.raises(ExperimentError):
        run_isolation("napoleon", [("c1", 5, 0)], ["c1"])


def test_unknown_manifold():
    with pytest.raises(CensusLookupError):
        run_isolation("nope", [])


def test_light_single_fill_mirrors_dark():
    r = run_isolation("napoleon", [("d1", 5, 0)])
    assert r.deltas["d2"] < 1e-9 and r.deltas["d3"] < 1e-9
    assert max(r.deltas[c] for c in ("c1", "c2", "c3")) > 1e-4


@pytest.mark.parametrize("triple,expected", [
    (("c1", "c2", "c3"), True),
    (("d1", "d2", "d3"), True),
    (("c1", "c2", "d1"), False),
    (("c3", "d2", "d3"), False),
])
def test_brunnian(triple, expected):
    r = check_brunnian("napoleon", triple, (5, 0))
    assert r.verdict is expected
    assert len(r.singles) == 3 and len(r.doubles) == 3


def test_brunnian_needs_distinct():
    with pytest.raises(ExperimentError):
        check_brunnian("napoleon", ("c1", "c1", "c2"))


def test_first_order_dark():
    r = first_order_derivative("napoleon", "c1", "c2")
    assert r.norm < 1e-6
    r = first_order_derivative("napoleon", "c2", "c1")
    assert r.norm < 1e-6


def test_first_order_light_moves():
    r = first_order_derivative("napoleon", "c1", "d1")
    assert r.norm > 1e-3
    # Richardson pair agrees to the reported estimate
    assert r.error_estimate < 1e-6
    for ra, rb in zip(r.coarse, r.fine):
        for a, b in zip(ra, rb):
            assert abs(a - b) <= r.error_estimate + 1e-15


def test_first_order_but_not_isolated():
    # equivariant filling of c2 and c3 seen from c1
    d = first_order_derivative("napoleon", ("c2", "c3"), "c1")
    assert d.norm < 1e-6
    r = run_isolation("napoleon", [("c2", 5, 0), ("c3", 5, 0)], ["c1"])
    assert r.deltas["c1"] > 1e-6


def test_derivative_step_range():
    with pytest.raises(ExperimentError):
        first_order_derivative("napoleon", "c1", "c2", h=0.5)
    with pytest.raises(ExperimentError):
        first_order_derivative("napoleon", "c1", "c1")


def test_reports_deterministic():
    a = run_isolation("napoleon", [("c1", 4, 1)], seed=11)
    b = run_isolation("napoleon", [("c1", 4, 1)], seed=11)
    assert to_json(report_dict(a)) == to_json(report_dict(b))
    assert to_csv(a) == to_csv(b)
    payload = json.loads(to_json(report_dict(a)))
    assert payload["version"] == "report v1" and payload["kind"] == "isolation"


def test_csv_shapes():
    r = check_brunnian("napoleon", ("c1", "c2", "c3"))
    lines = to_csv(r).strip().split("\n")
    assert lines[0] == "# report v1"
    assert lines[-1] == "verdict,true"
    d = first_order_derivative("napoleon", "c1", "d1")
    assert to_csv(d).count("\n") == 3
