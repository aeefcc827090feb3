import json
import math

import numpy as np
import pytest

from alphamod.harness import (
    BoundednessSetup,
    ExperimentReport,
    emit_report,
    exp_boundedness,
    exp_counterexample,
    exp_lift,
    fit_slope,
    plan_grid,
)
from alphamod.spaces import QuasiNormParams
from alphamod.symbols import CounterexampleParams


def test_fit_slope_recovers_power_law():
    ells = list(range(0, 30))
    vals = [3.0 * (1 + l) ** -1.7 for l in ells]
    slope, err = fit_slope(ells, vals)
    assert slope == pytest.approx(-1.7, abs=1e-12)
    assert err < 1e-12


def test_plan_grid_keeps_half_nyquist():
    g = plan_grid(650.0, 0.05, 0.5)
    assert g.nyquist >= 2 * 650.0
    assert g.dxi <= 0.05 / 10


def test_report_serialisation(tmp_path):
    rep = ExperimentReport("demo", {"q": math.inf, "alpha": 0.5},
                           records=[{"index": 2, "value": 1.5, "ratio": 0.25}], slope=0.1, verdict="pass")
    data = json.loads(rep.to_json())
    assert data["params"]["q"] == "inf"
    assert list(data) == sorted(data)
    emit_report(rep, "csv", tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_text() == "index,value,ratio\n2,1.5,0.25\n"
    emit_report(rep, "json", tmp_path / "r.json")
    assert (tmp_path / "r.json").read_text() == rep.to_json()
    with pytest.raises(ValueError):
        emit_report(rep, "xml", tmp_path / "r.xml")


def test_constant_symbol_ratio_is_one():
    rep = exp_boundedness(QuasiNormParams(1.0, 1.0, 0.0, 0.5), symbol="constant")
    assert all(r["ratio"] == 1.0 for r in rep.records)
    assert rep.passed


def test_boundedness_setup_reuse_matches_fresh_run():
    setup = BoundednessSetup(0.5, ells=range(0, 13))
    prm = QuasiNormParams(2.0, 1.0, 0.0, 0.5)
    a = exp_boundedness(prm, setup=setup)
    b = exp_boundedness(prm, ells=range(0, 13))
    assert a.to_json() == b.to_json()
    with pytest.raises(ValueError):
        exp_boundedness(QuasiNormParams(2.0, 1.0, 0.0, 0.3), setup=setup)


def test_boundedness_negative_control_fails():
    rep = exp_boundedness(QuasiNormParams(0.5, 1.0, 0.0, 0.5), symbol="counterexample")
    assert rep.slope >= 0.4
    assert rep.verdict == "fail"


def test_counterexample_rejects_short_range():
    with pytest.raises(ValueError, match="at least 6"):
        exp_counterexample(CounterexampleParams(), ells=range(2, 7))
    with pytest.raises(ValueError, match="m_max"):
        exp_counterexample(CounterexampleParams(m_max=10), ells=range(2, 20))


def test_counterexample_weight_cancels_in_ratio():
    reps = {s: exp_counterexample(CounterexampleParams(), p=0.5, q=1.0, s=s) for s in (-1.0, 0.0, 1.0)}
    slopes = [r.fits["ratio"]["slope"] for r in reps.values()]
    assert max(slopes) - min(slopes) <= 0.05
    # s = 1 adds about s / (1 - alpha) = 2 to both norm slopes; the weight sits
    # on the live band indices rather than on l itself, hence the loose match
    for key in ("norm_f", "norm_sigma_f"):
        shift = reps[1.0].fits[key]["slope"] - reps[0.0].fits[key]["slope"]
        assert shift == pytest.approx(2.0, abs=0.1)
    assert all(r.passed for r in reps.values())


def test_lift_zero_is_identity_and_deterministic():
    prm = QuasiNormParams(1.0, 1.0, 0.0, 0.5)
    rep = exp_lift(prm, t_values=(0.0,), ells=range(8, 20))
    assert all(r["ratio"] == pytest.approx(1.0, abs=1e-14) for r in rep.records)
    again = exp_lift(prm, t_values=(0.0,), ells=range(8, 20))
    assert rep.to_json() == again.to_json()
