"""End-to-end experiments with exponent fits and deterministic reports.

Each experiment sweeps a frequency-localised test family indexed by ``l``,
measures quasi-norms, fits log-log slopes against ``<l>`` by ordinary least
squares (``l >= 2``) and compares them with predicted exponents.

* :func:`exp_boundedness` -- ``S^0_{alpha,alpha}`` operators keep
  ``||sigma(X, D) f|| / ||f||`` flat across the family.
* :func:`exp_counterexample` -- the narrow-bump symbol amplifies
  ``M^{s,alpha}_{p,q}`` quasi-norms by ``<l>^{(A - A_eps) n (1/p - 1)}`` when
  ``p < 1``.
* :func:`exp_lift` -- the Bessel lift ``J^t`` maps ``M^s`` onto ``M^{s-t}``.
* :func:`exp_embedding` -- sharp inclusions between ``M^{s,alpha}_{2,q}``
  and the modulation space ``M^0_{2,q}``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cover import CoverParams, cover_for_window, make_cover
from .grid import Grid, GridSignal, Spectrum, _next_pow2, _slope, fft, ifft
from .psido import quantize_apply
from .spaces import (
    QuasiNormParams,
    alpha_norm,
    band_norms,
    bessel_lift,
    embedding_check,
    plateau_family,
    weighted_lq,
)
from .symbols import (
    CounterexampleParams,
    SymbolDomain,
    constant,
    make_counterexample,
    make_modulated_family,
    seminorm,
)


# ---------------------------------------------------------------------------
# reports


def _jsonable(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(v, (np.floating,)):
        return _jsonable(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class ExperimentReport:
    """Outcome of one experiment; serialises deterministically."""

    id: str
    params: dict
    records: list = field(default_factory=list)
    slope: float = 0.0
    stderr: float = 0.0
    verdict: str = "fail"
    provenance: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return _jsonable(
            {
                "id": self.id,
                "params": self.params,
                "records": self.records,
                "slope": self.slope,
                "stderr": self.stderr,
                "verdict": self.verdict,
                "provenance": self.provenance,
                "fits": self.fits,
                "notes": self.notes,
            }
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "value", "ratio"])
        for r in self.records:
            writer.writerow([r["index"], repr(float(r["value"])), repr(float(r["ratio"]))])
        return buf.getvalue()


def emit_report(report, fmt, path):
    """Write a report as ``json`` or ``csv``."""
    if fmt == "json":
        text = report.to_json()
    elif fmt == "csv":
        text = report.to_csv()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def fit_slope(ells, values):
    """OLS slope of ``log value`` against ``log <l>`` over ``l >= 2``."""
    pts = [(1.0 + abs(l), v) for l, v in zip(ells, values) if abs(l) >= 2 and v > 0]
    if len(pts) < 2:
        return 0.0, 0.0
    return _slope([p[0] for p in pts], [p[1] for p in pts])


def _provenance(seed, grid, cover):
    return {
        "seed": seed,
        "grid": grid.describe(),
        "cover_hash": cover.digest() if cover is not None else None,
    }


# ---------------------------------------------------------------------------
# grid planning


def plan_grid(max_freq, min_width, p, dim=1, resolution=None):
    """Choose ``(N, L)`` for an experiment.

    ``L = 2 pi 2^j`` resolves the narrowest spectral feature ``min_width``
    with ``resolution / (2 pi)`` periods (more for ``p < 1``, whose
    quasi-norms weigh slowly decaying tails), and ``N`` places ``max_freq``
    at most at half the Nyquist frequency.
    """
    if resolution is None:
        resolution = 100.0 if p < 1 else 30.0
    L = 2 * math.pi * _next_pow2(math.ceil(resolution / (2 * math.pi * min_width)))
    N = _next_pow2(math.ceil(2 * max_freq * L / math.pi))
    return Grid(N, L, dim)


# ---------------------------------------------------------------------------
# boundedness


def _symbol_for(name, cover, grid, alpha, eps=0.25):
    if name == "modulated":
        return make_modulated_family(cover, profile="cos", grid=grid)
    if name == "constant":
        return constant(1.0)
    if name == "counterexample":
        return make_counterexample(CounterexampleParams(alpha=alpha, eps=eps))[0]
    raise ValueError(f"unknown symbol family {name!r}")


def _apply_to_spectrum(sigma, F):
    grid = F.grid
    if sigma.x_independent:
        if sigma.name == "constant":
            return Spectrum(grid, F.coeffs * sigma.params["value"])
        # the multiplier is only needed where F is nonzero
        nz = np.nonzero(F.coeffs)
        out = np.zeros_like(F.coeffs)
        pts = grid.xi_points()[nz]
        out[nz] = sigma.multiplier()(pts) * F.coeffs[nz]
        return Spectrum(grid, out)
    if sigma.apply is not None:
        return fft(sigma.apply(F))
    return fft(quantize_apply(sigma, ifft(F)))


class BoundednessSetup:
    """Grid, cover, symbol, seminorm and plateau family shared by boundedness runs.

    Operator outputs and band norms are cached, so sweeping ``(p, q, s)``
    at fixed ``alpha`` reuses every transform.
    """

    def __init__(self, alpha, symbol="modulated", ells=range(0, 25), seminorm_order=2, grid=None, seed=0):
        self.alpha = float(alpha)
        self.ells = list(ells)
        self.symbol_name = symbol if isinstance(symbol, str) else getattr(symbol, "name", "symbol")
        self.seminorm_order = seminorm_order
        self.seed = seed
        A = alpha / (1 - alpha)
        lmax = max(abs(l) for l in self.ells)
        scale_max = (1 + lmax) ** A
        self.max_freq = scale_max * lmax + 2.5 * max(1.0, A + 1) * scale_max
        if symbol == "counterexample":
            cp = CounterexampleParams(alpha=alpha)
            min_width = cp.support * (1 + max(2, min(abs(l) for l in self.ells))) ** cp.A_eps / 2
            p_hint = 0.5
        else:
            min_width, p_hint = 0.5, 1.0
        self.grid = grid or plan_grid(self.max_freq, min_width, p_hint)
        self.cover = cover_for_window(alpha, self.grid.nyquist)
        self.sigma = symbol if not isinstance(symbol, str) else _symbol_for(symbol, self.cover, self.grid, alpha)
        dom = SymbolDomain(xi_window=self.max_freq)
        self.seminorm = seminorm(self.sigma, seminorm_order, (0.0, alpha, alpha), dom, seed=seed)
        self.family = plateau_family(self.cover, self.grid, self.ells)
        self._outputs = {}
        self._norms = {}

    def output(self, i):
        if i not in self._outputs:
            self._outputs[i] = _apply_to_spectrum(self.sigma, self.family[i])
        return self._outputs[i]

    def band_norms(self, i, which, p):
        key = (i, which, p)
        if key not in self._norms:
            S = self.family[i] if which == "f" else self.output(i)
            self._norms[key] = band_norms(S, self.cover, p)
        return self._norms[key]


def exp_boundedness(params, symbol="modulated", ells=range(0, 25), seminorm_order=2, grid=None,
                    seed=0, slope_tolerance=0.1, setup=None):
    """Ratios ``R = ||sigma(X,D) f_l|| / (||sigma||_N ||f_l||)`` on the plateau family.

    ``symbol`` is ``"modulated"`` (default), ``"constant"``,
    ``"counterexample"`` or a :class:`Symbol`.  Passes iff the fitted slope
    of ``R`` against ``<l>`` is at most ``slope_tolerance``.  A prebuilt
    :class:`BoundednessSetup` may be passed to share work across runs.
    """
    if setup is None:
        setup = BoundednessSetup(params.alpha, symbol, ells, seminorm_order, grid, seed)
    elif not math.isclose(setup.alpha, params.alpha, rel_tol=0, abs_tol=1e-12):
        raise ValueError("setup alpha does not match params alpha")
    report = ExperimentReport(
        "boundedness",
        {"alpha": params.alpha, "p": params.p, "q": params.q, "s": params.s, "symbol": setup.symbol_name,
         "ells": setup.ells, "seminorm_order": setup.seminorm_order},
        provenance=_provenance(setup.seed, setup.grid, setup.cover),
    )
    for i, ell in enumerate(setup.ells):
        nf = weighted_lq(setup.band_norms(i, "f", params.p), params)
        if nf == 0:
            report.notes.append(f"l={ell}: zero norm, excluded")
            continue
        nout = weighted_lq(setup.band_norms(i, "out", params.p), params)
        report.records.append(
            {"index": ell, "value": nout, "norm_f": nf, "ratio": nout / (setup.seminorm * nf)}
        )
    report.fits["seminorm"] = setup.seminorm
    report.slope, report.stderr = fit_slope([r["index"] for r in report.records], [r["ratio"] for r in report.records])
    report.verdict = "pass" if report.slope <= slope_tolerance else "fail"
    return report


# ---------------------------------------------------------------------------
# counterexample


def exp_counterexample(params, p=0.5, q=1.0, s=0.0, ells=range(2, 25), grid=None, seed=0,
                       ratio_factor=0.8, exponent_slack=0.15, flat_slack=0.1):
    """Growth of ``G(l) = ||sigma(X,D) f_l|| / ||f_l||`` for the narrow-bump symbol.

    Predicted slopes against ``<l>``: ``||f_l||`` grows like
    ``s/(1-alpha) + A n (1 - 1/p)``, ``||sigma(X,D) f_l||`` like
    ``s/(1-alpha) + A_eps n (1 - 1/p)``, so ``G`` like ``(A - A_eps) n (1/p - 1)``.
    For ``p < 1`` the verdict passes when the ratio slope reaches
    ``ratio_factor`` times the prediction and both norm slopes are within
    ``exponent_slack``; for ``p >= 1`` the ratio slope must be within
    ``flat_slack`` of zero.
    """
    ells = list(ells)
    if len(ells) < 6:
        raise ValueError(f"need at least 6 values of l for a stable fit, got {len(ells)}")
    n = params.dim
    if n != 1:
        raise NotImplementedError("the counterexample experiment runs in dimension 1")
    A, Ae = params.A, params.A_eps
    sigma, family = make_counterexample(params)
    lmin, lmax = min(ells), max(ells)
    if lmax > params.m_max:
        raise ValueError(f"l={lmax} exceeds the symbol's lattice truncation m_max={params.m_max}")
    scale_max = (1 + lmax) ** A
    max_freq = scale_max * lmax + 2.5 * max(1.0, A + 1) * scale_max
    min_width = params.support * (1 + max(lmin, 2)) ** Ae / 2
    grid = grid or plan_grid(max_freq, min_width, p)
    cover = cover_for_window(params.alpha, max_freq * 1.5)
    qp = QuasiNormParams(p, q, s, params.alpha)
    mult = sigma.multiplier()
    report = ExperimentReport(
        "counterexample",
        {"alpha": params.alpha, "eps": params.eps, "c": params.support, "p": p, "q": q, "s": s,
         "ells": ells, "m_max": params.m_max},
        provenance=_provenance(seed, grid, cover),
    )
    xi = grid.xi
    for ell in ells:
        F = family.spectrum(ell, grid)
        # sigma only needs evaluating where F is nonzero
        nz = np.nonzero(F.coeffs)[0]
        out = np.zeros_like(F.coeffs)
        out[nz] = mult(xi[nz]) * F.coeffs[nz]
        nf = alpha_norm(F, cover, qp)
        nout = alpha_norm(Spectrum(grid, out), cover, qp)
        report.records.append({"index": ell, "value": nout, "norm_f": nf, "ratio": nout / nf})
    idx = [r["index"] for r in report.records]
    w = s / (1 - params.alpha)
    pred_f = w + A * n * (1 - 1 / p)
    pred_sf = w + Ae * n * (1 - 1 / p)
    pred_ratio = (A - Ae) * n * (1 / p - 1)
    slope_f, err_f = fit_slope(idx, [r["norm_f"] for r in report.records])
    slope_sf, err_sf = fit_slope(idx, [r["value"] for r in report.records])
    report.slope, report.stderr = fit_slope(idx, [r["ratio"] for r in report.records])
    report.fits = {
        "norm_f": {"slope": slope_f, "stderr": err_f, "predicted": pred_f},
        "norm_sigma_f": {"slope": slope_sf, "stderr": err_sf, "predicted": pred_sf},
        "ratio": {"slope": report.slope, "stderr": report.stderr, "predicted": pred_ratio},
    }
    if p < 1:
        ok = (
            report.slope >= ratio_factor * pred_ratio
            and abs(slope_f - pred_f) <= exponent_slack
            and abs(slope_sf - pred_sf) <= exponent_slack
        )
        report.fits["conclusion"] = "unbounded" if report.slope >= ratio_factor * pred_ratio else "inconclusive"
    else:
        ok = abs(report.slope) <= flat_slack
        report.fits["conclusion"] = "bounded" if ok else "inconclusive"
    report.verdict = "pass" if ok else "fail"
    return report


# ---------------------------------------------------------------------------
# lift and embedding


def exp_lift(params, t_values=(-1.0, 1.0), ells=range(8, 65), grid=None, seed=0, slope_tolerance=0.1):
    """``||J^t f_l; M^{s-t}|| / ||f_l; M^s||`` across the plateau family, per ``t``."""
    alpha = params.alpha
    ells = list(ells)
    A = alpha / (1 - alpha)
    lmax = max(ells)
    scale_max = (1 + lmax) ** A
    max_freq = scale_max * lmax + 2.5 * max(1.0, A + 1) * scale_max
    min_width = 0.5 * (1 + min(ells)) ** A
    grid = grid or plan_grid(max_freq, min_width, params.p)
    cover = cover_for_window(alpha, max_freq * 1.5)
    family = plateau_family(cover, grid, ells)
    report = ExperimentReport(
        "lift",
        {"alpha": alpha, "p": params.p, "q": params.q, "s": params.s, "t_values": list(t_values), "ells": ells},
        provenance=_provenance(seed, grid, cover),
    )
    ok = True
    worst = 0.0
    for t in t_values:
        ratios = []
        for ell, F in zip(ells, family):
            base = alpha_norm(F, cover, params)
            lifted = alpha_norm(bessel_lift(F, t), cover, params.with_s(params.s - t))
            ratios.append(lifted / base)
            report.records.append({"index": ell, "t": t, "value": lifted, "ratio": lifted / base})
        slope, err = fit_slope(ells, ratios)
        report.fits[f"t={t:g}"] = {"slope": slope, "stderr": err, "min_ratio": min(ratios), "max_ratio": max(ratios)}
        ok = ok and abs(slope) <= slope_tolerance
        if abs(slope) >= abs(worst):
            worst = slope
            report.stderr = err
    report.slope = worst
    report.verdict = "pass" if ok else "fail"
    return report


def exp_embedding(q_values=(1.0, 2.0, math.inf), alpha=0.5, ells=range(8, 65), grid=None, seed=0):
    """Both embedding ratios per ``q``; passes iff none grows across the family."""
    ells = list(ells)
    A = alpha / (1 - alpha)
    lmax = max(ells)
    scale_max = (1 + lmax) ** A
    max_freq = scale_max * lmax + 2.5 * max(1.0, A + 1) * scale_max
    # the uniform cover has unit-width bands: resolve those too
    grid = grid or plan_grid(max_freq, 0.5, 2.0)
    cover = cover_for_window(alpha, max_freq * 1.5)
    uniform = cover_for_window(0.0, max_freq * 1.5)
    family = plateau_family(cover, grid, ells)
    scales = [1.0 + l for l in ells]
    report = ExperimentReport(
        "embedding",
        {"alpha": alpha, "q_values": list(q_values), "ells": ells},
        provenance=_provenance(seed, grid, cover),
    )
    ok = True
    worst = -math.inf
    for q in q_values:
        er = embedding_check(q, alpha, family, cover, uniform, scales)
        for ell, up, lo in zip(ells, er.upper.records, er.lower.records):
            report.records.append({"index": ell, "q": q, "value": up["ratio"], "ratio": lo["ratio"]})
        key = "q=inf" if math.isinf(q) else f"q={q:g}"
        report.fits[key] = {
            "s1": er.s1,
            "s2": er.s2,
            "upper_slope": er.upper.slope,
            "upper_stderr": er.upper.stderr,
            "lower_slope": er.lower.slope,
            "lower_stderr": er.lower.stderr,
            "passed": er.passed,
        }
        ok = ok and er.passed
        for sl, se in ((er.upper.slope, er.upper.stderr), (er.lower.slope, er.lower.stderr)):
            if sl > worst:
                worst, report.stderr = sl, se
    report.slope = worst
    report.verdict = "pass" if ok else "fail"
    return report


def report_digest(report):
    return hashlib.sha256(report.to_json().encode()).hexdigest()
