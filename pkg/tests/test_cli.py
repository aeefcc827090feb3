import json
import math

import numpy as np
import pytest

from alphamod import io as aio
from alphamod.cli import main
from alphamod.grid import Grid, from_function, lp_norm


@pytest.fixture
def signal(tmp_path):
    g = Grid(1024, 16 * math.pi)
    f = from_function(g, lambda x: np.exp(-x ** 2) * np.exp(3j * x))
    aio.write_amod(tmp_path / "f.amod", f)
    aio.write_csv(tmp_path / "f.csv", f)
    return f


def test_cover_verify(tmp_path):
    out = tmp_path / "report.json"
    code = main(["cover", "verify", "--alpha", "0.5", "--dim", "1", "--kmax", "32", "--window", "200",
                 "--out", str(out), "--save-cover", str(tmp_path / "cover.json")])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["partition_defect"] <= 1e-10
    assert rep["support_violations"] == []
    assert [d["beta"] for d in rep["derivative_constants"]] == [[1], [2], [3]]
    assert (tmp_path / "cover.json").exists()


def test_cover_verify_uncovered_window(tmp_path, capsys):
    code = main(["cover", "verify", "--alpha", "0.5", "--kmax", "4", "--window", "500"])
    assert code == 2
    assert "uncovered" in capsys.readouterr().err


def test_norm_lp(tmp_path, signal, capsys):
    for name in ("f.amod", "f.csv"):
        assert main(["norm", "lp", "--p", "0.5", "--in", str(tmp_path / name)]) == 0
        assert float(capsys.readouterr().out) == pytest.approx(lp_norm(signal, 0.5), rel=1e-12)


def test_norm_alpha(tmp_path, signal, capsys):
    main(["cover", "verify", "--alpha", "0.5", "--kmax", "32", "--out", str(tmp_path / "r.json"),
          "--save-cover", str(tmp_path / "cover.json")])
    code = main(["norm", "alpha", "--alpha", "0.5", "--p", "0.5", "--q", "1", "--s", "0",
                 "--in", str(tmp_path / "f.amod"), "--cover", str(tmp_path / "cover.json")])
    assert code == 0
    assert float(capsys.readouterr().out) > 0
    assert main(["norm", "alpha", "--alpha", "0.3", "--p", "1", "--q", "1",
                 "--in", str(tmp_path / "f.amod"), "--cover", str(tmp_path / "cover.json")]) == 2


def test_op_apply(tmp_path, signal):
    out = tmp_path / "g.amod"
    assert main(["op", "apply", "--symbol", "constant:value=1", "--in", str(tmp_path / "f.amod"),
                 "--out", str(out)]) == 0
    assert np.array_equal(aio.read_signal(out).samples, signal.samples)
    assert main(["op", "apply", "--symbol", "counterexample:alpha=0.5,eps=0.25,c=0.0625",
                 "--in", str(tmp_path / "f.amod"), "--out", str(tmp_path / "h.csv")]) == 0
    assert aio.read_signal(tmp_path / "h.csv").grid.N == 1024


def test_exp_with_config_and_override(tmp_path):
    cfg = tmp_path / "lift.cfg"
    cfg.write_text("# lift run\nalpha = 0.5\np = 2\nq = 2\nt = -1,1\nlmin = 8\nlmax = 20  # short\n")
    out, csv = tmp_path / "r.json", tmp_path / "r.csv"
    code = main(["exp", "lift", "--config", str(cfg), "--lmax", "24", "--out", str(out), "--csv", str(csv)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["params"]["ells"][-1] == 24
    assert rep["verdict"] == "pass"
    assert csv.read_text().splitlines()[0] == "index,value,ratio"


def test_exp_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["exp", "embedding", "--config", str(cfg)]) == 2


def test_exp_counterexample_flat_case_exit_zero(tmp_path):
    out = tmp_path / "r.json"
    code = main(["exp", "counterexample", "--alpha", "0.5", "--eps", "0.25", "--p", "1", "--q", "1",
                 "--s", "0", "--lmax", "24", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["fits"]["conclusion"] == "bounded"
