import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from alphamod.cover import CoverParams, make_cover
from alphamod.grid import Grid, GridSignal, Spectrum, fft, ifft, lp_norm, tone
from alphamod.spaces import (
    QuasiNormParams,
    alpha_norm,
    alpha_norm_equiv,
    band_norms,
    bessel_lift,
    cover_for_grid,
    embedding_check,
    embedding_exponents,
    lq_sum,
    plateau_family,
)

G = Grid(2048, 16 * math.pi)


@pytest.fixture(scope="module")
def cover05():
    return cover_for_grid(0.5, G)


def _bandlimited(grid, seed, limit=100.0):
    rng = np.random.default_rng(seed)
    F = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    F[np.abs(grid.xi) > limit] = 0
    return ifft(Spectrum(grid, F))


def test_params_validation():
    with pytest.raises(ValueError):
        QuasiNormParams(0.0, 1.0)
    with pytest.raises(ValueError):
        QuasiNormParams(1.0, -1.0)
    with pytest.raises(ValueError):
        QuasiNormParams(1.0, 1.0, math.inf)
    assert QuasiNormParams(1, 1, 2.0, 0.5).weight_exponent == 4.0


def test_lq_sum():
    assert lq_sum([3.0, 4.0], 2) == pytest.approx(5.0)
    assert lq_sum([3.0, 4.0], math.inf) == 4.0
    assert lq_sum([], 1) == 0.0
    assert lq_sum([1.0, 1.0], 0.5) == pytest.approx(4.0)


def test_zero_signal(cover05):
    z = GridSignal(G, np.zeros(G.shape, dtype=complex))
    assert alpha_norm(z, cover05, QuasiNormParams(1, 1, 0, 0.5)) == 0.0
    assert alpha_norm_equiv(z, cover05, QuasiNormParams(1, 1, 0, 0.5)) == 0.0


def test_alpha_mismatch_rejected(cover05):
    with pytest.raises(ValueError, match="alpha"):
        alpha_norm(_bandlimited(G, 0), cover05, QuasiNormParams(1, 1, 0, 0.3))


def test_signal_beyond_cover_rejected():
    cover = make_cover(CoverParams(0.5, 1, k_max=4))
    with pytest.raises(ValueError, match="k_max"):
        alpha_norm(_bandlimited(G, 0, 300.0), cover, QuasiNormParams(1, 1, 0, 0.5))


@given(st.integers(0, 10 ** 6), st.floats(-5, 5, allow_nan=False).filter(lambda c: abs(c) > 1e-3))
def test_homogeneity(seed, c):
    cover = cover_for_grid(0.5, G)
    f = _bandlimited(G, seed)
    for p, q in ((0.5, 1.0), (2.0, math.inf)):
        prm = QuasiNormParams(p, q, 1.0, 0.5)
        assert alpha_norm(f * c, cover, prm) == pytest.approx(abs(c) * alpha_norm(f, cover, prm), rel=1e-12)


@given(st.integers(0, 10 ** 6))
def test_monotone_in_s(seed):
    cover = cover_for_grid(0.5, G)
    f = _bandlimited(G, seed)
    vals = [alpha_norm(f, cover, QuasiNormParams(1.0, 2.0, s, 0.5)) for s in (-1.0, 0.0, 0.5, 2.0)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


@given(st.integers(0, 10 ** 6), st.sampled_from([(0.5, 1.0), (1.0, 0.5), (2.0, 2.0), (math.inf, 1.0)]))
def test_quasi_triangle(seed, pq):
    cover = cover_for_grid(0.5, G)
    p, q = pq
    prm = QuasiNormParams(p, q, 0.0, 0.5)
    f, g = _bandlimited(G, seed), _bandlimited(G, seed + 1) * 3.0
    r = min(1.0, p, q)
    lhs = alpha_norm(f + g, cover, prm) ** r
    rhs = alpha_norm(f, cover, prm) ** r + alpha_norm(g, cover, prm) ** r
    assert lhs <= rhs * (1 + 1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, 0.7])
def test_l2_equivalence(alpha):
    cover = cover_for_grid(alpha, G)
    V = cover.overlap
    for seed in range(5):
        f = _bandlimited(G, seed)
        ratio = alpha_norm(f, cover, QuasiNormParams(2, 2, 0, alpha)) / lp_norm(f, 2)
        assert V ** -0.5 <= ratio <= V ** 0.5


def test_alpha_zero_is_modulation_norm():
    g = Grid(1024, 16 * math.pi)
    cover = cover_for_grid(0.0, g)
    f = _bandlimited(g, 9, 40.0)
    S = fft(f)
    # weight <k>^s with s/(1 - 0) = s
    direct = []
    for band in cover.bands(g.axes()):
        banded = np.zeros_like(S.coeffs)
        banded[band.slices] = S.coeffs[band.slices] * band.weights
        if np.any(banded):
            direct.append((1 + abs(band.k[0])) ** 1.5 * lp_norm(ifft(Spectrum(g, banded)), 2))
    assert alpha_norm(f, cover, QuasiNormParams(2, 1, 1.5, 0.0)) == pytest.approx(sum(direct), rel=1e-10)


def test_single_band_signal(cover05):
    k0 = 9
    c, s = cover05.center(k0), cover05.scale(k0)
    F = Spectrum(G, np.where(np.abs(G.xi - c) <= 0.05 * s, 1.0 + 0j, 0.0))
    support = G.xi[F.coeffs != 0]
    live = {k for k in cover05.keys if np.any(cover05.eta(k, support))}
    norms = band_norms(F, cover05, 1.0)
    assert set(norms) == live and (k0,) in live
    assert max(norms, key=norms.get) == (k0,)
    direct = 0.0
    for k in live:
        banded = Spectrum(G, F.coeffs * cover05.eta(k, G.xi))
        direct += (1 + abs(k[0])) ** 2 * lp_norm(ifft(banded), 1.0)
    prm = QuasiNormParams(1.0, 1.0, 1.0, 0.5)
    assert alpha_norm(F, cover05, prm) == pytest.approx(direct, rel=1e-3)


def test_pure_tone_equivalence_at_q_infinity():
    g = Grid(4096, 8 * math.pi)
    cover = cover_for_grid(0.5, g)
    k0 = 16
    # the tone sits where eta_{k0} is largest (closest to a lone plateau)
    weights = cover.eta(k0, g.xi)
    j = int(np.argmax(weights)) - g.N // 2
    assert weights.max() > 1 - 1e-6
    f = tone(g, j)
    prm = QuasiNormParams(2.0, math.inf, 0.0, 0.5)
    ratio = alpha_norm_equiv(f, cover, prm) / alpha_norm(f, cover, prm)
    assert ratio == pytest.approx(1.0, abs=1e-6)


def test_equivalence_ratio_bounded_across_family(cover05):
    prm = QuasiNormParams(1.0, 1.0, 0.0, 0.5)
    ratios = []
    for seed in range(8):
        f = _bandlimited(G, seed)
        ratios.append(alpha_norm_equiv(f, cover05, prm) / alpha_norm(f, cover05, prm))
    assert min(ratios) >= 1.0
    assert max(ratios) <= 3 * cover05.overlap


def test_bessel_lift_identities():
    f = _bandlimited(G, 3)
    assert np.allclose(bessel_lift(f, 0.0).samples, f.samples, atol=1e-13)
    back = bessel_lift(bessel_lift(f, 1.7), -1.7)
    assert np.linalg.norm(back.samples - f.samples) <= 1e-10 * np.linalg.norm(f.samples)
    twice = bessel_lift(bessel_lift(f, 1.0), 1.0)
    once = bessel_lift(f, 2.0)
    assert np.linalg.norm(twice.samples - once.samples) <= 1e-10 * np.linalg.norm(once.samples)
    S = fft(f)
    assert isinstance(bessel_lift(S, 1.0), Spectrum)


def test_embedding_exponents():
    assert embedding_exponents(2.0, 0.5) == (0.0, 0.0)
    assert embedding_exponents(1.0, 0.5) == (0.25, 0.0)
    assert embedding_exponents(math.inf, 0.5) == (0.0, -0.25)
    assert embedding_exponents(1.0, 0.5, dim=2) == (0.5, 0.0)


def test_embedding_check_q2_reduces_to_l2_equivalence():
    g = Grid(8192, 16 * math.pi)
    cover = cover_for_grid(0.5, g)
    fam = plateau_family(cover, g, range(4, 12))
    rep = embedding_check(2.0, 0.5, fam, cover)
    uniform = cover_for_grid(0.0, g)
    # both norms sit within their overlap bounds of ||f||_2
    lo, hi = cover.overlap ** -0.5, uniform.overlap ** 0.5
    for r in rep.upper.records:
        assert lo - 1e-12 <= r["ratio"] <= 1 / lo + 1e-12
        assert hi ** -1 - 1e-12 <= r["ratio"]
    assert rep.passed


def test_norm_stable_under_profile_change():
    from alphamod.cover import BumpProfile

    g = Grid(2048, 16 * math.pi)
    base = cover_for_grid(0.5, g)
    other = make_cover(base.params, profile=BumpProfile(steepness=3.0))
    prm = QuasiNormParams(1.0, 1.0, 0.0, 0.5)
    ratios = [alpha_norm(f, base, prm) / alpha_norm(f, other, prm)
              for f in plateau_family(base, g, range(0, 10))]
    # two-sided constants, flat across frequency
    assert 0.5 <= min(ratios) and max(ratios) <= 2.0
    assert max(ratios) / min(ratios) <= 1.5
