"""Shared test fixtures that are not pytest fixtures."""

import numpy as np

from alphamod.grid import Spectrum, ifft
from alphamod.symbols import Symbol


def random_separable_symbol(seed, x_band=48, n_terms=3, n_modes=4):
    """``sum_t u_t(x) cos(w_t xi + phase_t)`` with integer x-frequencies ``|j| <= x_band``."""
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(n_terms):
        freqs = rng.integers(-x_band, x_band + 1, size=n_modes)
        amps = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
        w = rng.uniform(0.005, 0.05)
        ph = rng.uniform(0, 2 * np.pi)
        u = lambda x, fr=freqs, am=amps: sum(a * np.exp(1j * k * np.asarray(x)) for a, k in zip(am, fr))
        v = lambda xi, w=w, ph=ph: np.cos(w * np.asarray(xi) + ph)
        terms.append((u, v))

    def func(x, xi):
        return sum(u(x) * v(xi) for u, v in terms)

    return Symbol(func, terms=terms, name="random")


def random_bandlimited(grid, seed, limit):
    rng = np.random.default_rng(seed)
    F = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    F[np.abs(grid.xi_norm()) > limit] = 0
    return ifft(Spectrum(grid, F))
