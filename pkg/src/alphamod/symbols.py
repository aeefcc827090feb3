"""Symbols, Hormander seminorms and the test-symbol library.

A :class:`Symbol` wraps an evaluation oracle ``sigma(x, xi)`` together with
optional exact derivatives and a claimed class ``(b, rho, delta)``.  The
seminorm

    ||sigma; S^b_{rho,delta}||_N = max_{|beta| + |gamma| <= N}
        sup <xi>^{-(b + delta |beta| - rho |gamma|)} |d_x^beta d_xi^gamma sigma(x, xi)|

is estimated by deterministic dense sampling plus seeded random probes.

Library entries:

* :func:`constant`, :func:`bessel_symbol`, :func:`exponential_symbol`;
* :func:`make_modulated_family`, an x-dependent member of ``S^0_{alpha,alpha}``
  built by modulating each band of the cover at its own scale;
* :func:`make_counterexample`, an x-independent symbol with bumps narrower
  than the alpha-bands, paired with a plateau test family.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._jets import Jet, point_jets
from .cover import DEFAULT_PROFILE, CoverParams, make_cover
from .grid import GridSignal, Spectrum, fft, ifft


def _bracket_xi(xi, dim):
    xi = np.asarray(xi, dtype=float)
    if dim == 1:
        return 1.0 + np.abs(xi)
    return 1.0 + np.linalg.norm(xi, axis=-1)


@dataclass
class Symbol:
    """A symbol ``sigma(x, xi)`` with optional exact derivatives.

    ``func(x, xi)`` broadcasts like a ufunc (1D: arrays of scalars; 2D:
    arrays with a trailing axis of length 2).  ``deriv(x, xi, beta, gamma)``
    returns ``d_x^beta d_xi^gamma sigma`` for total orders up to
    ``max_order``.  ``terms`` optionally lists a separable form
    ``sigma = sum_t u_t(x) v_t(xi)``, which enables fast quantisation.
    """

    func: Callable
    dim: int = 1
    order: tuple = (0.0, 1.0, 0.0)
    deriv: Callable | None = None
    max_order: int = 0
    x_independent: bool = False
    terms: list | None = None
    breakpoints: np.ndarray | None = None
    name: str = "symbol"
    params: dict = field(default_factory=dict)
    apply: Callable | None = None

    def __call__(self, x, xi):
        return self.func(x, xi)

    def derivative(self, x, xi, beta, gamma):
        beta = tuple(np.atleast_1d(beta).astype(int))
        gamma = tuple(np.atleast_1d(gamma).astype(int))
        if sum(beta) + sum(gamma) == 0 and self.deriv is None:
            return np.asarray(self.func(x, xi))
        if self.deriv is None or sum(beta) + sum(gamma) > self.max_order:
            raise ValueError(f"no derivative oracle of order {sum(beta) + sum(gamma)} for {self.name}")
        return self.deriv(x, xi, beta, gamma)

    def scaled(self, c):
        """``c * sigma`` (derivatives and separable terms scale alike)."""
        deriv = None if self.deriv is None else (lambda x, xi, b, g: c * self.deriv(x, xi, b, g))
        terms = None
        if self.terms is not None:
            terms = [(u, (lambda xi, v=v: c * v(xi))) for u, v in self.terms]
        return Symbol(
            lambda x, xi: c * self.func(x, xi),
            self.dim,
            self.order,
            deriv,
            self.max_order,
            self.x_independent,
            terms,
            self.breakpoints,
            f"{c}*{self.name}",
            dict(self.params),
            None if self.apply is None else (lambda f: self.apply(f) * c),
        )

    def multiplier(self):
        """For x-independent symbols: ``xi -> sigma(xi)``."""
        if not self.x_independent:
            raise ValueError(f"{self.name} depends on x")
        zero = 0.0 if self.dim == 1 else np.zeros(2)
        return lambda xi: np.broadcast_to(self.func(zero, xi), _batch(xi, self.dim))


# ---------------------------------------------------------------------------
# seminorms


@dataclass(frozen=True)
class SymbolDomain:
    """Sampling design for seminorm estimates.

    ``x_box`` is an interval (per axis) of positions; ``xi_window`` bounds
    ``|xi|`` per axis.  In 1D the frequencies are the multiples of
    ``xi_step`` plus one jittered probe per ``probe_step`` cell, so a larger
    window always samples a superset of a smaller one.  ``n_xi`` and
    ``n_random`` size the 2D design.  ``h_x`` is the finite-difference step
    in ``x`` (default ``4 L / N`` for the default grid).
    """

    x_box: tuple = (-math.pi, math.pi)
    xi_window: float = 256.0
    n_x: int = 33
    n_xi: int = 4097
    n_random: int = 512
    h_x: float = 4 * 64 * math.pi / 4096
    xi_step: float = 0.125
    probe_step: float = 0.5


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _xi_samples(domain, sigma, seed):
    W = domain.xi_window
    n = int(math.floor(W / domain.xi_step))
    dense = domain.xi_step * np.arange(-n, n + 1)
    # Weyl-sequence jitter: deterministic per cell, so designs nest across windows
    m = int(math.ceil(W / domain.probe_step))
    cells = np.arange(-m, m)
    jitter = np.mod(cells * _GOLDEN + seed * math.sqrt(2.0), 1.0)
    probes = (cells + jitter) * domain.probe_step
    extra = [probes[np.abs(probes) <= W]]
    if sigma.breakpoints is not None:
        bp = np.asarray(sigma.breakpoints, dtype=float).ravel()
        extra.append(bp[np.abs(bp) <= W])
    return np.concatenate([dense] + extra)


def _fd_derivative(sigma, x, xi, beta, gamma, h_x, rho):
    """Central finite differences (first-order stencils composed per variable)."""
    hx = h_x
    hxi = _bracket_xi(xi, 1) ** rho * 1e-3
    b, g = int(beta[0]), int(gamma[0])
    stencils = {0: ([0], [1.0]), 1: ([-1, 1], [-0.5, 0.5]), 2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
                3: ([-2, -1, 1, 2], [-0.5, 1.0, -1.0, 0.5]), 4: ([-2, -1, 0, 1, 2], [1.0, -4.0, 6.0, -4.0, 1.0])}
    if b > 4 or g > 4:
        raise ValueError("finite-difference fallback supports orders up to 4 per variable")
    sx, wx = stencils[b]
    sxi, wxi = stencils[g]
    total = 0.0
    for ox, cx in zip(sx, wx):
        for oxi, cxi in zip(sxi, wxi):
            total = total + cx * cxi * sigma(x + ox * hx, xi + oxi * hxi)
    return total / (hx ** b * hxi ** g)


def seminorm(sigma, N, cls=None, domain=None, seed=0, fallback=True):
    """Estimate ``||sigma; S^b_{rho,delta}||_N`` on a sampled domain.

    Exact derivative oracles are used where available; otherwise central
    finite differences (1D only) when ``fallback`` is set.
    """
    domain = domain or SymbolDomain()
    b, rho, delta = sigma.order if cls is None else cls
    rng = np.random.default_rng(seed)
    if sigma.dim != 1:
        return _seminorm_2d(sigma, N, (b, rho, delta), domain, rng)
    lo, hi = domain.x_box
    xs = np.concatenate([np.linspace(lo, hi, domain.n_x), rng.uniform(lo, hi, 8)])
    xis = _xi_samples(domain, sigma, seed)
    if sigma.x_independent:
        xs = xs[:1]
    X, XI = np.meshgrid(xs, xis, indexing="ij")
    weight_base = _bracket_xi(XI, 1)
    best = 0.0
    for total in range(N + 1):
        for bx in range(total + 1):
            gx = total - bx
            if sigma.x_independent and bx > 0:
                continue
            if total == 0 or (sigma.deriv is not None and total <= sigma.max_order):
                d = sigma.derivative(X, XI, (bx,), (gx,))
            elif fallback:
                d = _fd_derivative(sigma, X, XI, (bx,), (gx,), domain.h_x, rho)
            else:
                raise ValueError(f"{sigma.name}: derivative order {total} unavailable and fallback disabled")
            w = weight_base ** (-(b + delta * bx - rho * gx))
            best = max(best, float(np.max(np.abs(d) * w)))
    return best


def _seminorm_2d(sigma, N, cls, domain, rng):
    b, rho, delta = cls
    lo, hi = domain.x_box
    m = max(3, int(math.sqrt(domain.n_x)))
    ax = np.linspace(lo, hi, m)
    xs = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    if sigma.x_independent:
        xs = xs[:1]
    W = domain.xi_window
    k = max(5, int(math.sqrt(domain.n_xi)))
    axi = np.linspace(-W, W, k)
    xis = np.stack(np.meshgrid(axi, axi, indexing="ij"), axis=-1).reshape(-1, 2)
    xis = np.concatenate([xis, rng.uniform(-W, W, (domain.n_random, 2))])
    X = xs[:, None, :]
    XI = xis[None, :, :]
    weight_base = _bracket_xi(XI, 2)
    best = 0.0
    for total in range(N + 1):
        for bx in itertools.product(range(total + 1), repeat=2):
            if sum(bx) > total:
                continue
            for gx in itertools.product(range(total + 1), repeat=2):
                if sum(bx) + sum(gx) != total:
                    continue
                if sigma.x_independent and sum(bx) > 0:
                    continue
                d = sigma.derivative(X, XI, bx, gx)
                w = weight_base ** (-(b + delta * sum(bx) - rho * sum(gx)))
                best = max(best, float(np.max(np.abs(d) * w)))
    return best


# ---------------------------------------------------------------------------
# elementary symbols


def constant(value=1.0, dim=1):
    value = complex(value) if np.iscomplexobj(value) else float(value)

    def func(x, xi):
        return value * np.ones(np.broadcast_shapes(_batch(x, dim), _batch(xi, dim)))

    def deriv(x, xi, beta, gamma):
        shape = np.broadcast_shapes(_batch(x, dim), _batch(xi, dim))
        if sum(beta) + sum(gamma) == 0:
            return value * np.ones(shape)
        return np.zeros(shape)

    return Symbol(
        func, dim, (0.0, 1.0, 0.0), deriv, 8, True,
        terms=[(lambda x: np.ones(_batch(x, dim)), lambda xi: value * np.ones(_batch(xi, dim)))],
        name="constant", params={"value": value},
    )


def _batch(a, dim):
    s = np.shape(a)
    return s if dim == 1 else s[:-1]


def _xi_jets(xi, order, dim):
    return point_jets(xi, order, dim)


def bessel_symbol(b, dim=1, max_order=4):
    """``(1 + |xi|^2)^{b/2}``, a member of ``S^b_{1,0}``."""

    def v(xi):
        xi = np.asarray(xi, dtype=float)
        r2 = xi * xi if dim == 1 else np.sum(xi * xi, axis=-1)
        return (1.0 + r2) ** (b / 2.0)

    def func(x, xi):
        return v(xi) * np.ones(_batch(x, dim))

    def deriv(x, xi, beta, gamma):
        shape = np.broadcast_shapes(_batch(x, dim), _batch(xi, dim))
        if sum(beta):
            return np.zeros(shape)
        order = sum(gamma)
        z = _xi_jets(np.asarray(xi, dtype=float), order, dim)
        r2 = z[0] * z[0]
        for za in z[1:]:
            r2 = r2 + za * za
        jet = (r2 + 1.0).power(b / 2.0)
        return np.broadcast_to(jet.derivative(gamma), shape)

    return Symbol(
        func, dim, (float(b), 1.0, 0.0), deriv, max_order, True,
        terms=[(lambda x: np.ones(_batch(x, dim)), v)], name="bessel", params={"b": b},
    )


def exponential_symbol(a, dim=1):
    """``e^{i a . x}``: quantises to multiplication by a plane wave (frequency shift)."""
    a = np.atleast_1d(np.asarray(a, dtype=float))

    def u(x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * (a[0] * x if dim == 1 else x @ a))

    def func(x, xi):
        return u(x) * np.ones(_batch(xi, dim))

    def deriv(x, xi, beta, gamma):
        shape = np.broadcast_shapes(_batch(x, dim), _batch(xi, dim))
        if sum(gamma):
            return np.zeros(shape, dtype=complex)
        factor = np.prod([(1j * a[i]) ** beta[i] for i in range(len(beta))])
        return np.broadcast_to(factor * u(x), shape)

    return Symbol(
        func, dim, (0.0, 1.0, 1.0), deriv, 8, False,
        terms=[(u, lambda xi: np.ones(_batch(xi, dim)))], name="exp", params={"a": a.tolist()},
    )


# ---------------------------------------------------------------------------
# modulated S^0_{alpha,alpha} family


def _poisson_derivs(t, order, r):
    """Derivatives of ``P(t) = (1 - r^2) / (1 - 2 r cos t + r^2)``."""
    tj = Jet.variable(np.asarray(t, dtype=float), 0, order, 1)
    den = (tj.cos() * (-2.0 * r)) + (1.0 + r * r)
    jet = den.reciprocal() * (1.0 - r * r)
    return [jet.derivative((n,)) for n in range(order + 1)]


def _cos_derivs(t, order):
    t = np.asarray(t, dtype=float)
    cycle = [np.cos(t), -np.sin(t), -np.cos(t), np.sin(t)]
    return [cycle[n % 4] for n in range(order + 1)]


def lattice_frequency(value, grid):
    """Nearest x-frequency of the grid lattice (``grid=None`` leaves ``value`` unchanged)."""
    if grid is None:
        return float(value)
    return float(np.rint(value / grid.dxi) * grid.dxi)


def make_modulated_family(cover, amplitudes=None, direction=None, profile="cos", r=0.5, grid=None,
                          max_order=3):
    """``sigma(x, xi) = sum_m a_m P(omega_m theta . x) eta_m(xi)``.

    ``omega_m = <m>^A`` (rounded to the x-frequency lattice of ``grid`` when
    given), ``theta`` a unit vector and ``P`` either ``cos`` or the Poisson
    kernel ``(1 - r^2) / (1 - 2 r cos t + r^2) = 1 + 2 sum_j r^j cos(j t)``.
    Each x-derivative brings a factor ``<m>^A``, comparable with
    ``<xi>^alpha`` on band ``m``, so the symbol lies in ``S^0_{alpha,alpha}``.
    """
    dim = cover.dim
    keys = cover.keys
    if amplitudes is None:
        amps = {k: 1.0 for k in keys}
    elif callable(amplitudes):
        amps = {k: float(amplitudes(k)) for k in keys}
    elif isinstance(amplitudes, dict):
        amps = {(k if isinstance(k, tuple) else (int(k),)): float(v) for k, v in amplitudes.items()}
    else:
        vals = np.asarray(amplitudes, dtype=float).ravel()
        if len(vals) != len(keys):
            raise ValueError("amplitude array must have one entry per retained lattice index")
        amps = dict(zip(keys, vals))
    bad = [k for k, a in amps.items() if abs(a) > 1.0 + 1e-15]
    if bad:
        raise ValueError(f"amplitudes must satisfy |a_m| <= 1; violated at m={bad[0]}")
    amps = {k: a for k, a in amps.items() if a != 0.0}
    theta = np.ones(1) if direction is None else np.asarray(direction, dtype=float).ravel()
    if dim == 2 and direction is None:
        theta = np.array([1.0, 0.0])
    if not math.isclose(float(np.linalg.norm(theta)), 1.0, rel_tol=1e-12):
        raise ValueError("direction must be a unit vector")
    if profile not in ("cos", "poisson"):
        raise ValueError(f"unknown modulation profile {profile!r}")
    omega = {k: lattice_frequency(cover.scale(k), grid) for k in amps}

    def shape_derivs(t, order):
        return _cos_derivs(t, order) if profile == "cos" else _poisson_derivs(t, order, r)

    def phase(x, k):
        x = np.asarray(x, dtype=float)
        proj = theta[0] * x if dim == 1 else x @ theta
        return omega[k] * proj

    def u_factory(k):
        return lambda x: shape_derivs(phase(x, k), 0)[0]

    def v_factory(k):
        return lambda xi: cover.eta(k, xi)

    terms = [(u_factory(k), (lambda xi, k=k, a=a: a * cover.eta(k, xi))) for k, a in sorted(amps.items())]

    def func(x, xi):
        total = 0.0
        for u, v in terms:
            total = total + u(x) * v(xi)
        return total * np.ones(np.broadcast_shapes(_batch(x, dim), _batch(xi, dim)))

    jet_cache = {}

    def band_jets(points):
        # jets at the symbol's full order, reused for every gamma on the same points
        key = (points.shape, points.tobytes())
        if key not in jet_cache:
            jet_cache.clear()
            jet_cache[key] = [(k, j) for k, j in cover.eta_jets(points, max_order) if k in amps]
        return jet_cache[key]

    def deriv(x, xi, beta, gamma):
        shape = np.broadcast_shapes(_batch(x, dim), _batch(xi, dim))
        vec = (2,) if dim == 2 else ()
        xi_b = np.broadcast_to(np.asarray(xi, dtype=float), shape + vec).reshape((-1,) + vec)
        x_b = np.broadcast_to(np.asarray(x, dtype=float), shape + vec).reshape((-1,) + vec)
        uniq, inv = np.unique(xi_b, axis=0, return_inverse=True)
        inv = inv.ravel()
        nb = sum(beta)
        theta_pow = np.prod([theta[i] ** beta[i] for i in range(len(beta))])
        out = np.zeros(len(xi_b))
        for k, jet in band_jets(uniq):
            dxi = jet.derivative(gamma)
            if not np.any(dxi):
                continue
            rows = np.nonzero(dxi[inv])[0]
            dx = shape_derivs(phase(x_b[rows], k), nb)[nb] * (omega[k] ** nb) * theta_pow
            out[rows] += amps[k] * dx * dxi[inv[rows]]
        return out.reshape(shape)

    def apply(f):
        # band by band: only bands meeting the spectrum of f contribute
        g = f.grid
        F = f.coeffs if isinstance(f, Spectrum) else fft(f).coeffs
        xs = g.x_points()
        total = np.zeros(g.shape, dtype=complex)
        for band in cover.bands(g.axes(), "eta"):
            if band.k not in amps or not np.any(F[band.slices]):
                continue
            G = np.zeros_like(F)
            G[band.slices] = F[band.slices] * band.weights
            u = shape_derivs(phase(xs, band.k), 0)[0]
            total += amps[band.k] * u * ifft(Spectrum(g, G)).samples
        return GridSignal(g, total)

    breakpoints = _band_breakpoints(cover)
    return Symbol(
        func, dim, (0.0, cover.alpha, cover.alpha), deriv, max_order, False, terms, breakpoints,
        name="modulated", params={"alpha": cover.alpha, "profile": profile, "r": r}, apply=apply,
    )


def _band_breakpoints(cover):
    if cover.dim != 1:
        return None
    c = cover.centers[:, 0]
    s = cover.C1 * cover.scales
    return np.concatenate([c, c - s, c + s, c - 2 * s, c + 2 * s, c - 1.5 * s, c + 1.5 * s])


# ---------------------------------------------------------------------------
# counterexample


@dataclass(frozen=True)
class CounterexampleParams:
    """Parameters of the narrow-bump counterexample.

    ``c=None`` selects ``3 / (8 K)`` (``1/16`` at ``alpha = 1/2``), which
    satisfies the disjointness condition ``2 c K < 1``.
    """

    alpha: float = 0.5
    eps: float = 0.25
    c: float | None = None
    m_max: int = 64
    dim: int = 1

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (0.0 < self.eps < self.alpha):
            raise ValueError(f"eps must lie in (0, alpha), got {self.eps}")
        if self.c is not None and not (self.c > 0 and 2 * self.c * self.K < 1):
            raise ValueError(f"c={self.c} violates 2 c K < 1 with K={self.K}")

    @property
    def A(self):
        return self.alpha / (1.0 - self.alpha)

    @property
    def A_eps(self):
        return (self.alpha - self.eps) / (1.0 - self.alpha)

    @property
    def K(self):
        return max(6.0, 1.0 + 2.0 ** self.A)

    @property
    def support(self):
        return 3.0 / (8.0 * self.K) if self.c is None else float(self.c)


def _lattice(m_max, dim):
    rng = range(-m_max, m_max + 1)
    if dim == 1:
        return np.array([(m,) for m in rng], dtype=int)
    return np.array(list(itertools.product(rng, rng)), dtype=int)


def counterexample_balls(params):
    """Centres ``<k>^A k`` and radii ``2 c <k>^A`` of the balls ``B_k``."""
    lat = _lattice(params.m_max, params.dim)
    br = 1.0 + np.linalg.norm(lat.astype(float), axis=1)
    centers = (br ** params.A)[:, None] * lat
    radii = 2.0 * params.support * br ** params.A
    return lat, centers, radii


def check_disjoint(params):
    """Raise ``ValueError`` naming the first pair of intersecting balls ``B_m``."""
    lat, centers, radii = counterexample_balls(params)
    if params.dim == 1:
        order = np.argsort(centers[:, 0])
        c = centers[order, 0]
        r = radii[order]
        gap = (c[1:] - c[:-1]) - (r[1:] + r[:-1])
        bad = np.nonzero(gap <= 0)[0]
        if len(bad):
            i = bad[0]
            raise ValueError(
                f"balls B_{int(lat[order[i], 0])} and B_{int(lat[order[i + 1], 0])} intersect"
            )
        return
    for i in range(len(lat)):
        d = np.linalg.norm(centers[i + 1:] - centers[i], axis=1)
        hit = np.nonzero(d <= radii[i + 1:] + radii[i])[0]
        if len(hit):
            j = i + 1 + hit[0]
            raise ValueError(f"balls B_{tuple(lat[i])} and B_{tuple(lat[j])} intersect")


def psi_pair(c, profile=DEFAULT_PROFILE):
    """``psi`` (supported in ``|t| <= c``) and ``psi~`` (1 on ``|t| <= c``, supported in ``|t| <= 2c``)."""

    def psi(t, dim=1):
        return profile(2.0 * np.asarray(t, dtype=float) / c, dim)

    def psi_tilde(t, dim=1):
        return profile(np.asarray(t, dtype=float) / c, dim)

    return psi, psi_tilde


class CounterexampleFamily:
    """Test signals ``F f_l(xi) = psi~((xi - <l>^A l) / <l>^A)`` on a grid."""

    def __init__(self, params, profile=DEFAULT_PROFILE):
        self.params = params
        self.profile = profile
        self.psi, self.psi_tilde = psi_pair(params.support, profile)

    def center(self, ell):
        ell = np.atleast_1d(np.asarray(ell, dtype=float))
        br = 1.0 + np.linalg.norm(ell)
        c = br ** self.params.A * ell
        return float(c[0]) if self.params.dim == 1 else c

    def scale(self, ell):
        return (1.0 + np.linalg.norm(np.atleast_1d(ell).astype(float))) ** self.params.A

    def spectrum(self, ell, grid):
        xi = grid.xi_points()
        z = (xi - self.center(ell)) / self.scale(ell)
        return Spectrum(grid, self.psi_tilde(z, grid.dim))

    def __call__(self, ell, grid):
        return self.spectrum(ell, grid)


def make_counterexample(params, profile=DEFAULT_PROFILE):
    """The symbol ``sum_m psi((xi - <m>^A m) / <m>^{A_eps})`` and its test family.

    Returns ``(symbol, family)``; ``family(ell, grid)`` gives the spectrum of
    ``f_l``.  Raises ``ValueError`` if two balls ``B_m`` intersect.
    """
    check_disjoint(params)
    dim = params.dim
    c = params.support
    lat, centers, _ = counterexample_balls(params)
    br = 1.0 + np.linalg.norm(lat.astype(float), axis=1)
    widths = br ** params.A_eps
    psi, _ = psi_pair(c, profile)

    def nearest(xi):
        xi = np.asarray(xi, dtype=float)
        if dim == 1:
            order = np.argsort(centers[:, 0])
            cs = centers[order, 0]
            j = np.clip(np.searchsorted(cs, xi), 1, len(cs) - 1)
            left = cs[j - 1]
            right = cs[j]
            pick = np.where(np.abs(xi - left) <= np.abs(xi - right), j - 1, j)
            return order[pick]
        d = np.linalg.norm(xi[..., None, :] - centers, axis=-1)
        return np.argmin(d, axis=-1)

    def v(xi):
        xi = np.asarray(xi, dtype=float)
        idx = nearest(xi)
        z = (xi - (centers[idx, 0] if dim == 1 else centers[idx])) / (widths[idx] if dim == 1 else widths[idx][..., None])
        return psi(z, dim)

    def func(x, xi):
        return v(xi) * np.ones(_batch(x, dim))

    def deriv(x, xi, beta, gamma):
        shape = np.broadcast_shapes(_batch(x, dim), _batch(xi, dim))
        if sum(beta):
            return np.zeros(shape)
        xi = np.broadcast_to(np.asarray(xi, dtype=float), shape + ((2,) if dim == 2 else ()))
        flat = xi.reshape(-1, 2) if dim == 2 else xi.reshape(-1)
        idx = nearest(flat)
        order = sum(gamma)
        zc = (flat - (centers[idx, 0] if dim == 1 else centers[idx]))
        scale = 2.0 / (c * widths[idx])
        z = point_jets(zc, order, dim)
        z = [za * scale for za in z]
        jet = profile.jet(z, order)
        return jet.derivative(gamma).reshape(shape)

    if dim == 1:
        bp = np.concatenate([centers[:, 0] + f * c * widths for f in (-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0)])
    else:
        bp = None
    symbol = Symbol(
        func, dim, (0.0, params.alpha - params.eps, params.alpha - params.eps), deriv, profile.max_order, True,
        terms=[(lambda x: np.ones(_batch(x, dim)), v)], breakpoints=bp, name="counterexample",
        params={"alpha": params.alpha, "eps": params.eps, "c": c, "m_max": params.m_max},
    )
    return symbol, CounterexampleFamily(params, profile)


# ---------------------------------------------------------------------------
# lattice inequality


@dataclass
class LatticeReport:
    alpha: float
    dim: int
    bound: int
    K: float
    max_ratio: float
    violations: list

    @property
    def passed(self):
        return not self.violations


def lattice_inequality_check(alpha, dim=1, bound=None):
    """Brute-force check of ``(<k>^A + <m>^A) |k - m| <= K |<k>^A k - <m>^A m|``.

    ``K = max(6, 1 + 2^A)``; ``bound`` defaults to 64 in 1D and 16 in 2D.
    Pairs with ``k = m`` (both sides zero) are skipped.
    """
    if bound is None:
        bound = 64 if dim == 1 else 16
    A = alpha / (1.0 - alpha)
    K = max(6.0, 1.0 + 2.0 ** A)
    lat = _lattice(bound, dim).astype(float)
    br = (1.0 + np.linalg.norm(lat, axis=1)) ** A
    cen = br[:, None] * lat
    lhs = (br[:, None] + br[None, :]) * np.linalg.norm(lat[:, None, :] - lat[None, :, :], axis=-1)
    rhs = K * np.linalg.norm(cen[:, None, :] - cen[None, :, :], axis=-1)
    off = ~np.eye(len(lat), dtype=bool)
    bad = np.argwhere(off & (lhs > rhs * (1 + 1e-13)))
    ratio = np.where(off, lhs / np.where(rhs > 0, rhs, np.inf) * K, 0.0)
    violations = [(lat[i].astype(int).tolist(), lat[j].astype(int).tolist()) for i, j in bad[:20]]
    return LatticeReport(alpha, dim, bound, K, float(ratio.max()), violations)


# ---------------------------------------------------------------------------
# symbol specs (CLI)


def _parse_value(v):
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return float(v)
    except ValueError:
        return v


def parse_symbol_spec(spec):
    """``"name:key=value,..."`` -> ``(name, {key: value})``."""
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"malformed symbol parameter {item!r} (expected key=value)")
        params[key.strip()] = _parse_value(val.strip())
    return name.strip(), params


def symbol_from_spec(spec, grid=None):
    """Build a library symbol from a spec string such as ``counterexample:alpha=0.5,eps=0.25``."""
    name, kw = parse_symbol_spec(spec)
    dim = int(kw.pop("dim", grid.dim if grid is not None else 1))
    if name == "constant":
        return constant(kw.get("value", 1.0), dim)
    if name == "bessel":
        return bessel_symbol(kw.get("b", 0.0), dim)
    if name == "exp":
        return exponential_symbol(kw.get("a", 1.0), dim)
    if name == "counterexample":
        params = CounterexampleParams(
            alpha=kw.get("alpha", 0.5), eps=kw.get("eps", 0.25), c=kw.get("c"),
            m_max=int(kw.get("m_max", 64)), dim=dim,
        )
        return make_counterexample(params)[0]
    if name == "modulated":
        alpha = kw.get("alpha", 0.5)
        k_max = int(kw.get("k_max", 32))
        cover = make_cover(CoverParams(alpha, dim, k_max=k_max))
        return make_modulated_family(cover, profile=kw.get("profile", "cos"), r=kw.get("r", 0.5), grid=grid)
    raise ValueError(f"unknown symbol {name!r}; known: constant, bessel, exp, counterexample, modulated")
