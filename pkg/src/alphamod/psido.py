"""Discrete Kohn-Nirenberg quantisation and the (l, m) symbol decomposition.

On a grid the operator ``sigma(X, D)`` acts by

    g(x_i) = L^{-n} sum_j e^{i x_i . xi_j} sigma(x_i, xi_j) F f(xi_j).

A symbol is split as ``sigma = sum_{l,m} sigma_{l,m}`` with

    sigma_{l,m}(x, xi) = (phi_l(D_x / <m>^A) sigma)(x, xi) eta_m(xi),

where ``{phi_l}`` is the uniform partition of unity and ``{eta_m}`` the alpha
cover.  The x-filter is applied column by column (one column per lattice
frequency ``xi_j``) with an FFT in ``x``.  The plateau variant replaces
``eta_m`` by ``kappa_m``.  The verification helpers measure spectral
localisation of the pieces, the decay of their operator norms in ``l`` and
the decay of their kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cover import UniformPartition
from .grid import GridSignal, InequalityReport, Spectrum, _slope, fft, ifft, lp_norm, multiplier_apply

# ---------------------------------------------------------------------------
# quantisation


def _dense_apply(sigma, f, chunk=256):
    g = f.grid
    F = fft(f).coeffs
    if g.dim == 1:
        x = g.x
        xi = g.xi
        out = np.empty(g.N, dtype=complex)
        for s in range(0, g.N, chunk):
            xs = x[s:s + chunk, None]
            table = np.asarray(sigma(xs, xi[None, :]), dtype=complex)
            out[s:s + chunk] = (np.exp(1j * xs * xi[None, :]) * table) @ F
        return GridSignal(g, out / g.L)
    xs = g.x_points().reshape(-1, 2)
    xis = g.xi_points().reshape(-1, 2)
    Ff = F.reshape(-1)
    out = np.empty(len(xs), dtype=complex)
    for s in range(0, len(xs), chunk):
        xc = xs[s:s + chunk]
        table = np.asarray(sigma(xc[:, None, :], xis[None, :, :]), dtype=complex)
        out[s:s + chunk] = (np.exp(1j * (xc @ xis.T)) * table) @ Ff
    return GridSignal(g, out.reshape(g.shape) / g.L ** 2)


def _separable_apply(sigma, f):
    g = f.grid
    total = np.zeros(g.shape, dtype=complex)
    for u, v in sigma.terms:
        total += np.asarray(u(g.x_points())) * multiplier_apply(v, f).samples
    return GridSignal(g, total)


def quantize_apply(sigma, f, method="auto", chunk=256):
    """Apply ``sigma(X, D)`` to a grid signal.

    ``method`` is ``"dense"`` (direct ``O(N^2)`` sum, the reference),
    ``"fft"`` (x-independent symbols as a Fourier multiplier),
    ``"separable"`` (sum of multipliers for symbols with a separable form)
    or ``"auto"`` (a symbol's own fast path when it has one, else the
    cheapest applicable method).
    """
    if sigma.dim != f.grid.dim:
        raise ValueError("symbol and grid dimensions differ")
    if method == "auto":
        if sigma.apply is not None:
            return sigma.apply(f)
        if sigma.x_independent:
            method = "fft"
        elif sigma.terms is not None:
            method = "separable"
        else:
            method = "dense"
    if method == "fft":
        if sigma.name == "constant":
            # constant symbols act by scalar multiplication; skip the transform round trip
            return GridSignal(f.grid, sigma.params["value"] * f.samples)
        return multiplier_apply(sigma.multiplier(), f)
    if method == "separable":
        if sigma.terms is None:
            raise ValueError(f"{sigma.name} has no separable form")
        return _separable_apply(sigma, f)
    if method == "dense":
        return _dense_apply(sigma, f, chunk)
    raise ValueError(f"unknown quantisation method {method!r}")


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class SymbolPiece:
    """``sigma_{l,m}`` (or the plateau variant) on the columns of its xi-support.

    ``table[i, c]`` is the piece at ``(x_i, xi_{cols[c]})``.
    """

    ell: int
    m: int
    plateau: bool
    cols: np.ndarray
    table: np.ndarray
    scale: float
    grid: object = None
    cover: object = None

    @property
    def xi(self):
        return self.grid.xi[self.cols]


class SymbolDecomposition:
    """Precomputed x-spectra of a symbol for repeated ``(l, m)`` slicing (1D grids)."""

    def __init__(self, sigma, cover, grid):
        if grid.dim != 1 or cover.dim != 1:
            raise NotImplementedError("the (l, m) decomposition is implemented for 1D grids")
        self.sigma = sigma
        self.cover = cover
        self.grid = grid
        self.partition = UniformPartition(1)
        self._columns = {}
        self._eta_bands = {b.k[0]: b for b in cover.bands(grid.axes(), "eta")}
        self._kappa_bands = {b.k[0]: b for b in cover.bands(grid.axes(), "kappa")}
        # x-frequencies of the grid in FFT (unshifted) order
        self.zeta = np.fft.fftfreq(grid.N, d=grid.dx) * 2 * math.pi

    def band(self, m, plateau=False):
        bands = self._kappa_bands if plateau else self._eta_bands
        if m not in bands:
            raise KeyError(f"band {m} does not meet the grid")
        return bands[m]

    def _column_spectrum(self, m, plateau):
        key = (m, plateau)
        if key not in self._columns:
            band = self.band(m, plateau)
            sl = band.slices[0]
            xi = self.grid.xi[sl]
            table = np.asarray(self.sigma(self.grid.x[:, None], xi[None, :]), dtype=complex)
            table = np.broadcast_to(table, (self.grid.N, len(xi)))
            # positions start at -L/2; the phase is irrelevant for band filtering
            self._columns[key] = (np.arange(sl.start, sl.stop), np.fft.fft(table, axis=0), band.weights)
        return self._columns[key]

    def ell_range(self, m):
        """All ``l`` whose ``phi_l(. / <m>^A)`` meets the x-frequency lattice."""
        s = self.cover.scale(m)
        zmax = float(np.max(np.abs(self.zeta))) / s
        return range(int(math.floor(-zmax - 1)), int(math.ceil(zmax + 1)) + 1)

    def active_ell_range(self, m, plateau=False, rel_tol=1e-14):
        """``l`` whose filter meets the x-frequencies actually present in band ``m``."""
        _, spec, _ = self._column_spectrum(m, plateau)
        mag = np.max(np.abs(spec), axis=1)
        top = mag.max()
        if top == 0:
            return range(0, 0)
        live = self.zeta[mag > rel_tol * top] / self.cover.scale(m)
        return range(int(math.floor(live.min())) - 1, int(math.ceil(live.max())) + 2)

    def ell_filter(self, ell, m):
        s = self.cover.scale(m)
        return self.partition.phi(ell, self.zeta / s)

    def piece(self, ell, m, plateau=False):
        cols, spec, weights = self._column_spectrum(m, plateau)
        filt = self.ell_filter(ell, m)
        table = np.fft.ifft(spec * filt[:, None], axis=0) * weights[None, :]
        return SymbolPiece(ell, m, plateau, cols, table, self.cover.scale(m), self.grid, self.cover)

    def m_range(self):
        return sorted(self._eta_bands)


def decompose(sigma, cover, m, ell, plateau=False, grid=None, decomposition=None):
    """Realise ``sigma_{l,m}`` (``plateau=False``) or its plateau variant."""
    if decomposition is None:
        if grid is None:
            raise ValueError("a grid or a precomputed decomposition is required")
        decomposition = SymbolDecomposition(sigma, cover, grid)
    return decomposition.piece(ell, m, plateau)


def apply_piece(piece, f):
    """``sigma_{l,m}(X, D) f`` restricted to the piece's xi-columns."""
    g = piece.grid
    F = fft(f).coeffs[piece.cols]
    phase = np.exp(1j * g.x[:, None] * piece.xi[None, :])
    return GridSignal(g, (phase * piece.table) @ F / g.L)


def reconstruct_symbol(decomposition, ells=None, ms=None):
    """``sum_{l,m} sigma_{l,m}`` as an ``(N, N)`` table over ``(x, xi)``."""
    g = decomposition.grid
    total = np.zeros((g.N, g.N), dtype=complex)
    for m in ms if ms is not None else decomposition.m_range():
        for ell in ells if ells is not None else decomposition.active_ell_range(m):
            p = decomposition.piece(ell, m)
            total[:, p.cols] += p.table
    return total


# ---------------------------------------------------------------------------
# region check


@dataclass
class RegionReport:
    ell: int
    m: int
    center: float
    radius: float
    mass_outside: float
    band_ratios: dict = field(default_factory=dict)
    tolerance: float = 1e-8

    @property
    def passed(self):
        return self.mass_outside <= self.tolerance

    @property
    def max_band_ratio(self):
        return max(self.band_ratios.values(), default=0.0)


def verify_region(piece, f, radius_scale=1.0, band_threshold=1e-10, output=None):
    """Spectral localisation of ``sigma_{l,m}(X, D) f``.

    The output spectrum must lie in the ball centred at ``<m>^A (l + m)``
    of radius ``(C + sqrt(n)) <m>^A`` (times ``radius_scale``).  Also records
    ``|k - m| / <l>`` for every plateau band ``k`` carrying relative output
    mass above ``band_threshold``.
    """
    g = piece.grid
    cover = piece.cover
    n = g.dim
    out = apply_piece(piece, f) if output is None else output
    F = fft(out).coeffs
    s = piece.scale
    center = s * (piece.ell + piece.m)
    radius = radius_scale * (cover.C + math.sqrt(n)) * s
    w = np.abs(F) ** 2
    total = w.sum()
    if total == 0:
        return RegionReport(piece.ell, piece.m, center, radius, 0.0)
    outside = float(np.sqrt(w[np.abs(g.xi - center) > radius].sum() / total))
    ratios = {}
    for band in cover.bands(g.axes(), "rho"):
        mass = float(np.sqrt(np.sum(np.abs(F[band.slices] * band.weights) ** 2) / total))
        if mass > band_threshold:
            ratios[band.k[0]] = abs(band.k[0] - piece.m) / (1.0 + abs(piece.ell))
    return RegionReport(piece.ell, piece.m, center, radius, outside, ratios)


# ---------------------------------------------------------------------------
# decay checks


@dataclass
class DecayReport:
    """Values against a sweep variable and their fitted log-log slope."""

    name: str
    records: list = field(default_factory=list)
    slope: float = 0.0
    stderr: float = 0.0
    threshold: float = 0.0
    mode: str = "upper"
    floor: float = 1e-13

    @property
    def fitted(self):
        return [r for r in self.records if r["index"] >= 2 and r["value"] > self.floor]

    @property
    def passed(self):
        pts = self.fitted
        if len(pts) < 2:
            # every value below the floating-point floor: decay of arbitrary order
            return self.mode == "upper"
        if self.mode == "upper":
            return self.slope <= self.threshold
        return abs(self.slope) <= self.threshold

    def fit(self):
        pts = self.fitted
        if len(pts) >= 2:
            self.slope, self.stderr = _slope([1 + r["index"] for r in pts], [r["value"] for r in pts])
        return self

    def to_dict(self):
        return {
            "name": self.name,
            "records": self.records,
            "slope": self.slope,
            "stderr": self.stderr,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def verify_ell_decay(sigma, cover, f, p, N, m, ells=range(0, 17), decomposition=None):
    """``r(l) = ||sigma~_{l,m}(X, D) eta_m(D) f||_p / ||eta_m(D) f||_p`` over ``l``.

    Passes when the fitted slope against ``<l>`` (``l >= 2``, values above
    ``1e-13``) is at most ``-N + 0.5``.
    """
    dec = decomposition or SymbolDecomposition(sigma, cover, f.grid)
    band = dec.band(m)
    F = fft(f).coeffs
    banded = np.zeros_like(F)
    banded[band.slices] = F[band.slices] * band.weights
    fm = ifft(Spectrum(f.grid, banded))
    denom = lp_norm(fm, p)
    # roundoff from the transform is not mass
    if denom <= 1e-13 * lp_norm(f, p):
        raise ValueError(f"f has no mass in band {m}")
    report = DecayReport(f"ell_decay_m{m}", threshold=-N + 0.5)
    for ell in ells:
        piece = dec.piece(ell, m, plateau=True)
        out = apply_piece(piece, fm)
        report.records.append({"index": int(ell), "value": lp_norm(out, p) / denom})
    return report.fit()


def oscillatory_kernel(piece, x_stride=4):
    """``k(x, y) = sum_j e^{i y xi_j} piece(x, xi_j) dxi`` on sub-sampled ``x`` and all ``y``."""
    g = piece.grid
    y = g.x
    phase = np.exp(1j * piece.xi[:, None] * y[None, :])
    return y, (piece.table[::x_stride] @ phase) * g.dxi


def oscillatory_kernel_bound(piece, M, x_stride=4):
    """``sup_{x,y} |k(x, y)| (1 + <m>^A |y|)^M / <m>^{An}``."""
    y, K = oscillatory_kernel(piece, x_stride)
    s = piece.scale
    n = piece.grid.dim
    w = (1.0 + s * np.abs(y)) ** M / s ** n
    return float(np.max(np.abs(K) * w[None, :]))


def verify_oscillatory_decay(pieces, M, N, sweep="ell", x_stride=4):
    """Kernel bounds across pieces; ``sweep="ell"`` fits decay, ``"m"`` checks flatness.

    For the ``l``-sweep the slope against ``<l>`` must be at most
    ``-N + 0.5``; for the ``m``-sweep the slope against ``<m>`` must lie
    within ``+-0.2``.
    """
    if sweep == "ell":
        report = DecayReport("oscillatory_ell", threshold=-N + 0.5)
        for p in pieces:
            report.records.append({"index": int(p.ell), "value": oscillatory_kernel_bound(p, M, x_stride)})
    elif sweep == "m":
        report = DecayReport("oscillatory_m", threshold=0.2, mode="flat")
        for p in pieces:
            report.records.append({"index": int(abs(p.m)), "value": oscillatory_kernel_bound(p, M, x_stride)})
    else:
        raise ValueError("sweep must be 'ell' or 'm'")
    return report.fit()


def verify_piece_convolution(outputs, cover, p):
    """``||rho_k(D) u||_p / (<l>^{An(1/min(1,p) - 1)} ||u||_p)`` over piece outputs.

    ``outputs`` is a list of ``(u, k, l)`` triples.  For ``p > 1`` the
    exponent vanishes and the ratio is the Young-inequality constant.
    Records with an empty output band carry ratio 0 and are excluded from
    the trend fit.
    """
    report = InequalityReport("piece_convolution")
    A = cover.A
    for u, k, ell in outputs:
        n = u.grid.dim
        expo = A * n * (1.0 / min(1.0, p) - 1.0)
        band = [b for b in cover.bands(u.grid.axes(), "rho") if b.k == ((k,) if np.ndim(k) == 0 else tuple(k))]
        F = fft(u).coeffs
        banded = np.zeros_like(F)
        if band:
            banded[band[0].slices] = F[band[0].slices] * band[0].weights
        out = ifft(Spectrum(u.grid, banded))
        denom = (1.0 + abs(ell)) ** expo * lp_norm(u, p)
        mass = float(np.sqrt(np.sum(np.abs(banded) ** 2) / max(np.sum(np.abs(F) ** 2), 1e-300)))
        report.records.append(
            {"scale": 1.0 + abs(ell), "k": int(k), "ell": int(ell), "mass": mass, "ratio": lp_norm(out, p) / denom}
        )
    live = [r for r in report.records if r["mass"] > 1e-10]
    if len(live) >= 2:
        report.slope, report.stderr = _slope([r["scale"] for r in live], [r["ratio"] for r in live])
    return report
