"""Periodic sampling grids, discrete Fourier transforms and multipliers.

Functions on ``R^n`` are represented by samples on a torus of period ``L``
per axis, large enough that test functions have decayed at the boundary.
The transform follows the analyst's convention

    F f(xi) = int e^{-i xi.x} f(x) dx,      f(x) = (2 pi)^{-n} int e^{i x.xi} F f(xi) dxi,

realised on ``N`` samples per axis by a centred FFT scaled by ``(L/N)^n``.
Frequencies ``xi_j = 2 pi j / L`` are stored in ascending order
``j = -N/2, ..., N/2 - 1``; positions are ``x_i = (i - N/2) L / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

DEFAULT_L = 64 * math.pi


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with ``N`` samples per axis on a period ``L``."""

    N: int = 4096
    L: float = DEFAULT_L
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.N < 2 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two, got {self.N}")
        if not self.L > 0:
            raise ValueError("L must be positive")

    @property
    def shape(self):
        return (self.N,) * self.dim

    @property
    def dx(self):
        return self.L / self.N

    @property
    def dxi(self):
        return 2 * math.pi / self.L

    @property
    def nyquist(self):
        return math.pi * self.N / self.L

    @property
    def x(self):
        """Sample positions along one axis."""
        return (np.arange(self.N) - self.N // 2) * self.dx

    @property
    def xi(self):
        """Lattice frequencies along one axis (ascending)."""
        return (np.arange(self.N) - self.N // 2) * self.dxi

    def axes(self):
        return (self.xi,) * self.dim

    def x_points(self):
        """Positions, shape ``(N,)`` in 1D and ``(N, N, 2)`` in 2D."""
        if self.dim == 1:
            return self.x
        return np.stack(np.meshgrid(self.x, self.x, indexing="ij"), axis=-1)

    def xi_points(self):
        if self.dim == 1:
            return self.xi
        return np.stack(np.meshgrid(self.xi, self.xi, indexing="ij"), axis=-1)

    def xi_norm(self):
        xi = self.xi_points()
        return np.abs(xi) if self.dim == 1 else np.linalg.norm(xi, axis=-1)

    def frequency_index(self, xi):
        """Lattice index (into the ascending axis) of the frequency nearest ``xi``."""
        j = np.rint(np.asarray(xi, dtype=float) / self.dxi).astype(int) + self.N // 2
        if np.any((j < 0) | (j >= self.N)):
            raise ValueError(f"frequency {xi} lies outside the Nyquist window")
        return j

    def describe(self):
        return {"N": self.N, "L": self.L, "dim": self.dim}


def _check_shape(grid, arr, what):
    if arr.shape != grid.shape:
        raise ValueError(f"{what} has shape {arr.shape}, grid expects {grid.shape}")


@dataclass
class GridSignal:
    """Samples of a function at the grid positions."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        _check_shape(self.grid, self.samples, "signal")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("signal contains non-finite samples")

    def __add__(self, other):
        _same_grid(self, other)
        return GridSignal(self.grid, self.samples + other.samples)

    def __sub__(self, other):
        _same_grid(self, other)
        return GridSignal(self.grid, self.samples - other.samples)

    def __mul__(self, c):
        return GridSignal(self.grid, self.samples * c)

    __rmul__ = __mul__


@dataclass
class Spectrum:
    """Fourier coefficients ``F f(xi_j)`` on the ascending frequency lattice."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        _check_shape(self.grid, self.coeffs, "spectrum")


def _same_grid(a, b):
    if a.grid != b.grid:
        raise ValueError("signals live on different grids")


def _axes(grid):
    return tuple(range(grid.dim))


def fft(f):
    g = f.grid
    c = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(f.samples)))
    return Spectrum(g, c * g.dx ** g.dim)


def ifft(F):
    g = F.grid
    s = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(F.coeffs)))
    return GridSignal(g, s * (g.N / g.L) ** g.dim)


def from_function(grid, func):
    """Sample ``func`` at the grid positions."""
    return GridSignal(grid, func(grid.x_points()))


def from_spectrum(grid, func):
    """Signal whose Fourier transform is ``func`` sampled on the lattice."""
    return ifft(Spectrum(grid, func(grid.xi_points())))


def tone(grid, j):
    """Pure tone ``e^{i xi_j . x}`` for lattice index ``j`` (signed integer(s))."""
    j = np.atleast_1d(j).astype(float)
    xs = grid.x_points()
    phase = j[0] * grid.dxi * xs if grid.dim == 1 else np.tensordot(xs, j * grid.dxi, axes=([-1], [0]))
    return GridSignal(grid, np.exp(1j * phase))


# ---------------------------------------------------------------------------
# multipliers


def multiplier_values(grid, m):
    """Evaluate a multiplier on the lattice (callable, scalar or array)."""
    if callable(m):
        vals = np.asarray(m(grid.xi_points()))
    else:
        vals = np.asarray(m)
    vals = np.broadcast_to(vals, grid.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("multiplier is not finite on the lattice")
    return vals


def multiplier_apply(m, f):
    """``m(D) f = F^{-1}[m F f]``."""
    F = fft(f)
    return ifft(Spectrum(f.grid, F.coeffs * multiplier_values(f.grid, m)))


def bessel_multiplier(t):
    def m(xi):
        xi = np.asarray(xi, dtype=float)
        r2 = xi * xi if xi.ndim == 1 else np.sum(xi * xi, axis=-1)
        return (1.0 + r2) ** (t / 2.0)

    return m


# ---------------------------------------------------------------------------
# quasi-norms


def lp_norm_samples(values, cell, p):
    """Riemann-sum ``L^p`` quasi-norm of samples on cells of measure ``cell``."""
    a = np.abs(values)
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    return float((cell * np.sum(a ** p)) ** (1.0 / p))


def lp_norm(f, p):
    """``||f||_{L^p}`` on the torus (Riemann sum; maximum for ``p = inf``)."""
    return lp_norm_samples(f.samples, f.grid.dx ** f.grid.dim, p)


def _next_pow2(n):
    return 1 << max(int(n) - 1, 1).bit_length()


def band_samples(spectrum, band, oversample=8):
    """Samples over one period of ``F^{-1}[w F f]`` for a band ``(slices, w)``.

    Only the block of coefficients covered by the band is transformed; the
    result is demodulated (irrelevant for absolute values) and sampled on
    ``M`` points per axis, with ``M`` the smallest power of two above
    ``oversample`` times the block width (capped at ``N``).  Returns the
    samples and the cell measure.
    """
    g = spectrum.grid
    block = spectrum.coeffs[band.slices] * band.weights
    sizes = block.shape
    M = tuple(min(g.N, _next_pow2(max(16, oversample * s))) for s in sizes)
    padded = np.zeros(M, dtype=complex)
    padded[tuple(slice(0, s) for s in sizes)] = block
    vals = np.fft.ifftn(padded) * (math.prod(M) / g.L ** g.dim)
    cell = math.prod(g.L / m for m in M)
    return vals, cell


def band_lp_norm(spectrum, band, p, oversample=8):
    vals, cell = band_samples(spectrum, band, oversample)
    return lp_norm_samples(vals, cell, p)


# ---------------------------------------------------------------------------
# inequality checks


class Ball(NamedTuple):
    center: object
    radius: float


def _slope(xs, ys):
    """OLS slope and standard error of ``log ys`` against ``log xs``."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    if len(np.unique(lx)) < 2:
        return 0.0, 0.0
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    dof = len(lx) - 2
    if dof <= 0:
        return float(coef[0]), 0.0
    s2 = float(resid @ resid) / dof
    var = s2 / float(np.sum((lx - lx.mean()) ** 2))
    return float(coef[0]), float(math.sqrt(var))


@dataclass
class InequalityReport:
    """Ratios of an inequality across a test family and their growth trend.

    The verdict fails only on growth: a fitted log-log slope of the ratio
    against the family scale above ``slope_tolerance``.
    """

    name: str
    records: list = field(default_factory=list)
    slope: float = 0.0
    stderr: float = 0.0
    slope_tolerance: float = 0.1

    @property
    def max_ratio(self):
        return max((r["ratio"] for r in self.records), default=0.0)

    @property
    def min_ratio(self):
        return min((r["ratio"] for r in self.records), default=0.0)

    @property
    def passed(self):
        return self.slope <= self.slope_tolerance

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"

    def fit(self):
        scales = [r["scale"] for r in self.records]
        ratios = [r["ratio"] for r in self.records]
        if len(self.records) >= 2 and min(ratios) > 0:
            self.slope, self.stderr = _slope(scales, ratios)
        return self

    def to_dict(self):
        return {
            "name": self.name,
            "records": self.records,
            "slope": self.slope,
            "stderr": self.stderr,
            "verdict": self.verdict,
        }


def spectral_mass_outside(f, ball):
    """Relative ``l^2`` spectral mass of ``f`` outside a closed ball."""
    F = fft(f)
    xi = f.grid.xi_points()
    c = np.asarray(ball.center, dtype=float)
    d = np.abs(xi - c) if f.grid.dim == 1 else np.linalg.norm(xi - c, axis=-1)
    w = np.abs(F.coeffs) ** 2
    total = w.sum()
    if total == 0:
        return 0.0
    return float(np.sqrt(w[d > ball.radius].sum() / total))


def periodic_convolution(f, g):
    _same_grid(f, g)
    return ifft(Spectrum(f.grid, fft(f).coeffs * fft(g).coeffs))


def _as_list(x):
    if isinstance(x, Ball):
        return [x]
    return list(x) if isinstance(x, (list, tuple)) else [x]


def check_bandlimited_convolution(f, g, ball, p, tol=1e-10):
    """Band-limited convolution inequality in ``L^p``, ``0 < p <= 1``.

    ``f``, ``g`` and ``ball`` may be single items or equal-length sequences
    forming a test family.  Each record holds
    ``||f * g||_p / (R^{n(1/p - 1)} ||f||_p ||g||_p)``; the growth trend is
    fitted against ``R``.
    """
    if not (0 < p <= 1):
        raise ValueError(f"the band-limited convolution check needs 0 < p <= 1, got {p}")
    fs, gs, balls = _as_list(f), _as_list(g), _as_list(ball)
    if len(balls) == 1:
        balls = balls * len(fs)
    report = InequalityReport("bandlimited_convolution")
    for fi, gi, b in zip(fs, gs, balls):
        for name, s in (("f", fi), ("g", gi)):
            leak = spectral_mass_outside(s, b)
            if leak > tol:
                raise ValueError(f"{name} is not band-limited to the ball (relative mass outside {leak:.3e})")
        n = fi.grid.dim
        conv = periodic_convolution(fi, gi)
        denom = b.radius ** (n * (1 / p - 1)) * lp_norm(fi, p) * lp_norm(gi, p)
        report.records.append({"scale": float(b.radius), "ratio": lp_norm(conv, p) / denom})
    return report.fit()


def peetre_maximal(f, R, r, center=None):
    """Discrete Peetre maximal function ``sup_y |f(x - y)| / (1 + (R|y|)^{n/r})``.

    Exhaustive scan over all periodic shifts ``y`` of the 1D grid, with
    ``|y|`` the distance on the torus.  Cost ``O(N^2)``.
    """
    g = f.grid
    if g.dim != 1:
        raise NotImplementedError("the Peetre maximal scan is implemented for 1D grids")
    a = np.abs(f.samples)
    N = g.N
    shifts = np.arange(N)
    dist = np.minimum(shifts, N - shifts) * g.dx
    weight = 1.0 + (R * dist) ** (1.0 / r)
    out = np.zeros(N)
    for s in range(N):
        # value at x_i - y_s for all i
        out = np.maximum(out, np.roll(a, s) / weight[s])
    return out


def check_peetre_maximal(f, ball, r, p, tol=1e-10):
    """``||f^*||_p / ||f||_p`` for the Peetre maximal function over a family."""
    if not (0 < r < p):
        raise ValueError(f"the Peetre maximal check needs 0 < r < p, got r={r}, p={p}")
    fs, balls = _as_list(f), _as_list(ball)
    if len(balls) == 1:
        balls = balls * len(fs)
    report = InequalityReport("peetre_maximal")
    for fi, b in zip(fs, balls):
        leak = spectral_mass_outside(fi, b)
        if leak > tol:
            raise ValueError(f"signal is not band-limited to the ball (relative mass outside {leak:.3e})")
        star = peetre_maximal(fi, b.radius, r)
        ratio = lp_norm_samples(star, fi.grid.dx, p) / lp_norm(fi, p)
        report.records.append({"scale": float(b.radius), "ratio": ratio})
    return report.fit()
