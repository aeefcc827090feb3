"""Command line entry point ``alphamod``.

Subcommands::

    alphamod cover verify --alpha 0.5 --dim 1 --kmax 32 --window 200 --out report.json
    alphamod norm lp --p 0.5 --in signal.csv
    alphamod norm alpha --alpha 0.5 --p 0.5 --q 1 --s 0 --in f.amod --cover cover.json
    alphamod op apply --symbol counterexample:alpha=0.5,eps=0.25 --in f.amod --out g.amod
    alphamod exp counterexample --alpha 0.5 --eps 0.25 --p 0.5 --q 1 --s 0 --lmax 24 --out report.json

Experiments read an optional ``--config`` file of ``key = value`` lines;
flags given on the command line override it.  The exit status is 0 iff
every verdict passes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import io as aio
from .cover import CoverParams, make_cover, verify_cover
from .grid import lp_norm
from .harness import emit_report, exp_boundedness, exp_counterexample, exp_embedding, exp_lift
from .psido import quantize_apply
from .spaces import QuasiNormParams, alpha_norm
from .symbols import CounterexampleParams, symbol_from_spec


def _real(text):
    t = str(text).strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(t)


def _real_list(value):
    if isinstance(value, (int, float)):
        return [float(value)]
    return [_real(v) for v in str(value).split(",") if v.strip()]


def _dump(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# cover / norm / op


def _cmd_cover_verify(args):
    params = CoverParams(args.alpha, args.dim, args.C, args.kmax)
    cover = make_cover(params, window=args.window)
    report = verify_cover(cover, window=args.window)
    _dump({**report.to_dict(), "cover": params.to_dict(), "cover_hash": cover.digest()}, args.out)
    if args.save_cover:
        aio.write_cover(args.save_cover, params)
    return 0 if report.passed else 1


def _cmd_norm_lp(args):
    f = aio.read_signal(args.input)
    print(repr(lp_norm(f, args.p)))
    return 0


def _cmd_norm_alpha(args):
    f = aio.read_signal(args.input)
    if args.cover:
        cover = aio.read_cover(args.cover)
    else:
        from .spaces import cover_for_grid

        cover = cover_for_grid(args.alpha, f.grid)
    if not math.isclose(cover.alpha, args.alpha, abs_tol=1e-12):
        raise ValueError(f"--alpha {args.alpha} does not match the cover's alpha {cover.alpha}")
    print(repr(alpha_norm(f, cover, QuasiNormParams(args.p, args.q, args.s, args.alpha))))
    return 0


def _cmd_op_apply(args):
    f = aio.read_signal(args.input)
    sigma = symbol_from_spec(args.symbol, f.grid)
    aio.write_signal(args.out, quantize_apply(sigma, f, method=args.method))
    return 0


# ---------------------------------------------------------------------------
# experiments

_EXP_DEFAULTS = {
    "counterexample": {"alpha": 0.5, "eps": 0.25, "c": None, "p": 0.5, "q": 1.0, "s": 0.0, "lmin": 2, "lmax": 24,
                       "m_max": 64, "seed": 0, "ratio_factor": 0.8, "exponent_slack": 0.15, "flat_slack": 0.1},
    "boundedness": {"alpha": 0.5, "p": 1.0, "q": 1.0, "s": 0.0, "lmin": 0, "lmax": 24, "symbol": "modulated",
                    "seminorm_order": 2, "seed": 0, "slope_tolerance": 0.1},
    "lift": {"alpha": 0.5, "p": 1.0, "q": 1.0, "s": 0.0, "t": "-1,1", "lmin": 8, "lmax": 64, "seed": 0,
             "slope_tolerance": 0.1},
    "embedding": {"alpha": 0.5, "q_values": "1,2,inf", "lmin": 8, "lmax": 64, "seed": 0},
}


def _settings(args):
    cfg = dict(_EXP_DEFAULTS[args.experiment])
    if args.config:
        file_cfg = aio.read_config(args.config)
        unknown = sorted(set(file_cfg) - set(cfg) - {"out", "csv"})
        if unknown:
            raise ValueError(f"unknown config key(s) for {args.experiment}: {', '.join(unknown)}")
        cfg.update(file_cfg)
    for key in list(cfg) + ["out", "csv"]:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    return cfg


def _run_experiment(cfg, name):
    ells = range(int(cfg["lmin"]), int(cfg["lmax"]) + 1)
    seed = int(cfg["seed"])
    if name == "counterexample":
        c = cfg["c"]
        params = CounterexampleParams(
            alpha=float(cfg["alpha"]), eps=float(cfg["eps"]), c=None if c in (None, "none") else float(c),
            m_max=int(cfg["m_max"]),
        )
        return exp_counterexample(
            params, p=_real(cfg["p"]), q=_real(cfg["q"]), s=float(cfg["s"]), ells=ells, seed=seed,
            ratio_factor=float(cfg["ratio_factor"]), exponent_slack=float(cfg["exponent_slack"]),
            flat_slack=float(cfg["flat_slack"]),
        )
    if name == "boundedness":
        qp = QuasiNormParams(_real(cfg["p"]), _real(cfg["q"]), float(cfg["s"]), float(cfg["alpha"]))
        return exp_boundedness(
            qp, symbol=str(cfg["symbol"]), ells=ells, seminorm_order=int(cfg["seminorm_order"]), seed=seed,
            slope_tolerance=float(cfg["slope_tolerance"]),
        )
    if name == "lift":
        qp = QuasiNormParams(_real(cfg["p"]), _real(cfg["q"]), float(cfg["s"]), float(cfg["alpha"]))
        return exp_lift(qp, _real_list(cfg["t"]), ells, seed=seed, slope_tolerance=float(cfg["slope_tolerance"]))
    return exp_embedding(_real_list(cfg["q_values"]), float(cfg["alpha"]), ells, seed=seed)


def _cmd_exp(args):
    cfg = _settings(args)
    report = _run_experiment(cfg, args.experiment)
    if cfg.get("out"):
        emit_report(report, "json", cfg["out"])
    else:
        sys.stdout.write(report.to_json())
    if cfg.get("csv"):
        emit_report(report, "csv", cfg["csv"])
    print(f"{report.id}: slope {report.slope:.4f} +/- {report.stderr:.4f} -> {report.verdict}", file=sys.stderr)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(prog="alphamod", description="Alpha-modulation spaces and exotic symbols.")
    sub = parser.add_subparsers(dest="command", required=True)

    cover = sub.add_parser("cover", help="alpha-covering utilities").add_subparsers(dest="action", required=True)
    cv = cover.add_parser("verify", help="check partition, support and derivative bounds")
    cv.add_argument("--alpha", type=float, required=True)
    cv.add_argument("--dim", type=int, default=1)
    cv.add_argument("--kmax", type=int, default=32)
    cv.add_argument("--C", type=float, default=None, help="support constant")
    cv.add_argument("--window", type=float, default=None)
    cv.add_argument("--out", default=None)
    cv.add_argument("--save-cover", default=None, help="also write the cover parameters as JSON")
    cv.set_defaults(func=_cmd_cover_verify)

    norm = sub.add_parser("norm", help="norms of a signal file").add_subparsers(dest="action", required=True)
    nl = norm.add_parser("lp", help="L^p quasi-norm")
    nl.add_argument("--p", type=_real, required=True)
    nl.add_argument("--in", dest="input", required=True)
    nl.set_defaults(func=_cmd_norm_lp)
    na = norm.add_parser("alpha", help="alpha-modulation quasi-norm")
    na.add_argument("--alpha", type=float, required=True)
    na.add_argument("--p", type=_real, required=True)
    na.add_argument("--q", type=_real, required=True)
    na.add_argument("--s", type=float, default=0.0)
    na.add_argument("--in", dest="input", required=True)
    na.add_argument("--cover", default=None, help="cover JSON; default spans the grid's frequencies")
    na.set_defaults(func=_cmd_norm_alpha)

    op = sub.add_parser("op", help="operators").add_subparsers(dest="action", required=True)
    oa = op.add_parser("apply", help="apply sigma(X, D) to a signal")
    oa.add_argument("--symbol", required=True, help="e.g. counterexample:alpha=0.5,eps=0.25")
    oa.add_argument("--in", dest="input", required=True)
    oa.add_argument("--out", required=True)
    oa.add_argument("--method", default="auto", choices=["auto", "dense", "fft", "separable"])
    oa.set_defaults(func=_cmd_op_apply)

    exp = sub.add_parser("exp", help="experiments")
    exp.add_argument("experiment", choices=sorted(_EXP_DEFAULTS))
    exp.add_argument("--config", default=None)
    exp.add_argument("--alpha", type=float)
    exp.add_argument("--eps", type=float)
    exp.add_argument("--c", type=float)
    exp.add_argument("--p", type=_real)
    exp.add_argument("--q", type=_real)
    exp.add_argument("--s", type=float)
    exp.add_argument("--t", help="comma-separated lift orders")
    exp.add_argument("--q-values", dest="q_values", help="comma-separated q values")
    exp.add_argument("--lmin", type=int)
    exp.add_argument("--lmax", type=int)
    exp.add_argument("--m-max", dest="m_max", type=int)
    exp.add_argument("--symbol")
    exp.add_argument("--seminorm-order", dest="seminorm_order", type=int)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--slope-tolerance", dest="slope_tolerance", type=float)
    exp.add_argument("--ratio-factor", dest="ratio_factor", type=float)
    exp.add_argument("--exponent-slack", dest="exponent_slack", type=float)
    exp.add_argument("--flat-slack", dest="flat_slack", type=float)
    exp.add_argument("--out", help="JSON report path (stdout if omitted)")
    exp.add_argument("--csv", help="also write the (index, value, ratio) table")
    exp.set_defaults(func=_cmd_exp)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NotImplementedError, OSError) as exc:
        print(f"alphamod: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
