"""Alpha-modulation quasi-norms, the Bessel lift and embedding checks.

``||f||_{M^{s,alpha}_{p,q}}`` is the ``l^q`` norm over ``k`` of
``<k>^{s/(1-alpha)} ||eta_k(D) f||_{L^p}``.  The equivalent norm replaces
``eta_k`` by the plateau bumps ``rho_k``.  Band ``L^p`` norms are computed
from the Fourier coefficients of each band only (see
:func:`alphamod.grid.band_samples`), so wide grids stay affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cover import CoverParams, cover_for_window, make_cover
from .grid import (
    GridSignal,
    InequalityReport,
    Spectrum,
    band_lp_norm,
    bessel_multiplier,
    fft,
    multiplier_apply,
)


@dataclass(frozen=True)
class QuasiNormParams:
    """Exponents of ``M^{s,alpha}_{p,q}``; ``p`` and ``q`` may be ``math.inf``."""

    p: float
    q: float
    s: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not (v > 0):
                raise ValueError(f"{name} must be positive (or inf), got {v}")
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if not math.isfinite(self.s):
            raise ValueError("s must be finite")

    @property
    def weight_exponent(self):
        return self.s / (1.0 - self.alpha)

    def with_s(self, s):
        return QuasiNormParams(self.p, self.q, s, self.alpha)


def lq_sum(values, q):
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return 0.0
    if math.isinf(q):
        return float(v.max())
    return float(np.sum(v ** q) ** (1.0 / q))


def _spectrum(f):
    if isinstance(f, Spectrum):
        return f
    if isinstance(f, GridSignal):
        return fft(f)
    raise TypeError("expected a GridSignal or Spectrum")


def _check_window(cover, S, tol=1e-12):
    """Reject signals with spectral mass beyond the cover's retained lattice."""
    g = S.grid
    xi = g.xi_points()
    d = np.abs(xi) if g.dim == 1 else np.max(np.abs(xi), axis=-1)
    w = np.abs(S.coeffs) ** 2
    total = w.sum()
    if total == 0:
        return
    outside = w[d > cover.covered_radius].sum() / total
    if outside > tol:
        raise ValueError(
            f"spectrum has relative mass {outside:.2e} beyond |xi| = {cover.covered_radius:.4g}; "
            "increase k_max"
        )


def band_norms(f, cover, p, kind="eta", oversample=8):
    """``{k: ||eta_k(D) f||_{L^p}}`` over bands meeting the spectrum of ``f``."""
    S = _spectrum(f)
    if S.grid.dim != cover.dim:
        raise ValueError("cover and grid dimensions differ")
    _check_window(cover, S)
    out = {}
    for band in cover.bands(S.grid.axes(), kind):
        if not np.any(S.coeffs[band.slices]):
            continue
        out[band.k] = band_lp_norm(S, band, p, oversample)
    return out


def _weighted_norm(f, cover, params, kind, oversample):
    if not math.isclose(cover.alpha, params.alpha, rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"cover alpha {cover.alpha} does not match params alpha {params.alpha}")
    return weighted_lq(band_norms(f, cover, params.p, kind, oversample), params)


def weighted_lq(norms, params):
    """``l^q`` sum of ``<k>^{s/(1-alpha)} n_k`` over a ``{k: n_k}`` map of band norms."""
    if not norms:
        return 0.0
    e = params.weight_exponent
    vals = [(1.0 + math.sqrt(sum(v * v for v in k))) ** e * n for k, n in sorted(norms.items())]
    return lq_sum(vals, params.q)


def alpha_norm(f, cover, params, oversample=8):
    """``||f||_{M^{s,alpha}_{p,q}}`` through the partition ``eta_k``."""
    return _weighted_norm(f, cover, params, "eta", oversample)


def alpha_norm_equiv(f, cover, params, oversample=8):
    """Equivalent quasi-norm through the plateau bumps ``rho_k``."""
    return _weighted_norm(f, cover, params, "rho", oversample)


def cover_for_grid(alpha, grid, **kwargs):
    """Cover whose retained lattice spans the grid's Nyquist window."""
    window = grid.nyquist * (math.sqrt(2.0) if grid.dim == 2 else 1.0)
    return cover_for_window(alpha, window, dim=grid.dim, **kwargs)


def bessel_lift(f, t):
    """``J^t f = (I - Delta)^{t/2} f`` (a spectrum input stays in frequency space)."""
    if isinstance(f, Spectrum):
        g = f.grid
        return Spectrum(g, f.coeffs * bessel_multiplier(t)(g.xi_points()))
    return multiplier_apply(bessel_multiplier(t), f)


# ---------------------------------------------------------------------------
# test families


def plateau_family(cover, grid, ells, width=0.5):
    """Signals with ``F f_l(xi) = phi0(|xi - c_l| / (width <l>^A))``.

    Each member occupies a fraction of the ``l``-th band of the cover, so
    the family sweeps frequency while staying band-shaped.
    """
    out = []
    for ell in ells:
        c = np.asarray(cover.center(ell), dtype=float)
        r = width * cover.scale(ell)
        xi = grid.xi_points()
        z = (xi - c) / r
        coeffs = cover.profile(z, grid.dim)
        out.append(Spectrum(grid, coeffs))
    return out


def spectral_scale(f):
    """Mean of ``<xi>`` weighted by ``|F f|^2`` (a frequency-localisation scale)."""
    S = _spectrum(f)
    w = np.abs(S.coeffs) ** 2
    return float(np.sum(w * (1.0 + S.grid.xi_norm())) / w.sum())


# ---------------------------------------------------------------------------
# embeddings


def embedding_exponents(q, alpha, dim=1):
    """``(s1, s2)`` with ``s1 = n alpha max(0, 1/q - 1/2)``, ``s2 = n alpha min(0, 1/q - 1/2)``."""
    d = (0.0 if math.isinf(q) else 1.0 / q) - 0.5
    return dim * alpha * max(0.0, d), dim * alpha * min(0.0, d)


@dataclass
class EmbeddingReport:
    q: float
    alpha: float
    s1: float
    s2: float
    upper: InequalityReport = field(default_factory=lambda: InequalityReport("embedding_upper"))
    lower: InequalityReport = field(default_factory=lambda: InequalityReport("embedding_lower"))

    @property
    def passed(self):
        return self.upper.passed and self.lower.passed

    def to_dict(self):
        return {
            "q": self.q,
            "alpha": self.alpha,
            "s1": self.s1,
            "s2": self.s2,
            "upper": self.upper.to_dict(),
            "lower": self.lower.to_dict(),
            "passed": self.passed,
        }


def embedding_check(q, alpha, family, cover=None, uniform=None, scales=None, oversample=8):
    """Both sides of ``M^{s1,alpha}_{2,q} c M^0_{2,q} c M^{s2,alpha}_{2,q}`` on a family.

    ``upper`` records ``||f||_{M^0_{2,q}} / ||f||_{M^{s1,alpha}_{2,q}}`` and
    ``lower`` records ``||f||_{M^{s2,alpha}_{2,q}} / ||f||_{M^0_{2,q}}``; each
    passes when its ratio shows no growth across the family scale.
    """
    family = list(family)
    if not family:
        raise ValueError("empty family")
    grid = _spectrum(family[0]).grid
    n = grid.dim
    s1, s2 = embedding_exponents(q, alpha, n)
    if cover is None:
        cover = cover_for_grid(alpha, grid)
    if uniform is None:
        uniform = cover_for_grid(0.0, grid)
    report = EmbeddingReport(q, alpha, s1, s2)
    for i, f in enumerate(family):
        S = _spectrum(f)
        scale = scales[i] if scales is not None else spectral_scale(S)
        m0 = alpha_norm(S, uniform, QuasiNormParams(2.0, q, 0.0, 0.0), oversample)
        ms1 = alpha_norm(S, cover, QuasiNormParams(2.0, q, s1, alpha), oversample)
        ms2 = alpha_norm(S, cover, QuasiNormParams(2.0, q, s2, alpha), oversample)
        report.upper.records.append({"scale": float(scale), "ratio": m0 / ms1})
        report.lower.records.append({"scale": float(scale), "ratio": ms2 / m0})
    report.upper.fit()
    report.lower.fit()
    return report


__all__ = [
    "QuasiNormParams",
    "alpha_norm",
    "alpha_norm_equiv",
    "band_norms",
    "bessel_lift",
    "cover_for_grid",
    "embedding_check",
    "embedding_exponents",
    "EmbeddingReport",
    "lq_sum",
    "weighted_lq",
    "plateau_family",
    "spectral_scale",
    "CoverParams",
    "make_cover",
]
