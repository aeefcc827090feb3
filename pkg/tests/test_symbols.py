import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from alphamod.cover import CoverParams, make_cover
from alphamod.grid import Grid
from alphamod.symbols import (
    CounterexampleParams,
    SymbolDomain,
    _fd_derivative,
    bessel_symbol,
    check_disjoint,
    constant,
    counterexample_balls,
    exponential_symbol,
    lattice_inequality_check,
    make_counterexample,
    make_modulated_family,
    parse_symbol_spec,
    seminorm,
    symbol_from_spec,
)


@pytest.fixture(scope="module")
def cover05():
    return make_cover(CoverParams(0.5, 1, k_max=40))


@pytest.fixture(scope="module")
def modulated(cover05):
    return make_modulated_family(cover05)


def test_constant_seminorm_is_one():
    for N in (0, 1, 3):
        assert seminorm(constant(1.0), N, (0.0, 0.5, 0.5)) == 1.0
    assert seminorm(constant(1.0, dim=2), 2, (0.0, 0.5, 0.5), SymbolDomain(xi_window=20.0, n_xi=81)) == 1.0


def test_seminorm_scales_linearly(modulated):
    dom = SymbolDomain(xi_window=100.0)
    base = seminorm(modulated, 2, (0.0, 0.5, 0.5), dom)
    assert seminorm(modulated.scaled(-2.5), 2, (0.0, 0.5, 0.5), dom) == pytest.approx(2.5 * base, rel=1e-12)


def test_seminorm_monotone(modulated):
    vals = [seminorm(modulated, N, (0.0, 0.5, 0.5), SymbolDomain(xi_window=100.0)) for N in (0, 1, 2)]
    assert vals[0] <= vals[1] <= vals[2]
    small = seminorm(modulated, 1, (0.0, 0.5, 0.5), SymbolDomain(xi_window=50.0))
    assert small <= vals[1]


def test_bessel_seminorm_stable_under_window_growth():
    sigma = bessel_symbol(1.5)
    vals = [seminorm(sigma, 3, (1.5, 1.0, 0.0), SymbolDomain(xi_window=W)) for W in (100.0, 200.0, 400.0)]
    assert max(vals) / min(vals) < 1.01


@given(st.floats(-2.0, 2.0), st.floats(-30.0, 30.0))
def test_bessel_derivatives_closed_form(x, xi):
    b = 1.5
    sigma = bessel_symbol(b)
    d1 = sigma.derivative(np.array([x]), np.array([xi]), (0,), (1,))[0]
    assert d1 == pytest.approx(b * xi * (1 + xi * xi) ** (b / 2 - 1), rel=1e-12, abs=1e-12)


def test_exponential_symbol_derivatives():
    sigma = exponential_symbol(2.0)
    x = np.array([0.3])
    xi = np.array([1.0])
    assert sigma.derivative(x, xi, (1,), (0,))[0] == pytest.approx(2j * np.exp(0.6j))


def test_modulated_family_zero_amplitudes(cover05):
    zero = make_modulated_family(cover05, amplitudes=lambda k: 0.0)
    assert seminorm(zero, 2, (0.0, 0.5, 0.5), SymbolDomain(xi_window=100.0)) == 0.0


def test_modulated_family_rejects_large_amplitudes(cover05):
    with pytest.raises(ValueError, match="amplitudes"):
        make_modulated_family(cover05, amplitudes=lambda k: 1.5)
    with pytest.raises(ValueError, match="unit vector"):
        make_modulated_family(cover05, direction=[2.0])


def test_modulated_seminorm_stable_in_its_class(modulated):
    vals = [seminorm(modulated, 2, (0.0, 0.5, 0.5), SymbolDomain(xi_window=W)) for W in (100.0, 200.0, 400.0)]
    assert max(vals) / min(vals) < 1.2


def test_modulated_seminorm_grows_in_stronger_class(modulated):
    vals = [seminorm(modulated, 2, (0.0, 0.75, 0.5), SymbolDomain(xi_window=W)) for W in (100.0, 200.0, 400.0)]
    assert vals[1] > 1.1 * vals[0] and vals[2] > 1.1 * vals[1]


def test_modulated_derivatives_match_finite_differences(modulated):
    x = np.array([0.3, 1.1, -2.0])
    xi = np.array([5.3, 37.2, -81.0])
    for beta, gamma in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
        exact = modulated.derivative(x, xi, (beta,), (gamma,))
        fd = _fd_derivative(modulated, x, xi, (beta,), (gamma,), 1e-4, 0.0)
        assert np.allclose(exact, fd, rtol=1e-4, atol=1e-5)


def test_counterexample_params():
    p = CounterexampleParams()
    assert p.A == 1.0 and p.K == 6.0 and p.support == pytest.approx(1 / 16)
    assert p.A_eps == pytest.approx(0.5)
    with pytest.raises(ValueError):
        CounterexampleParams(c=0.1)
    with pytest.raises(ValueError):
        CounterexampleParams(eps=0.6)


def test_counterexample_balls_disjoint():
    for alpha in (0.25, 0.5, 0.75):
        params = CounterexampleParams(alpha=alpha, eps=alpha / 2)
        check_disjoint(params)
        lat, centers, radii = counterexample_balls(params)
        order = np.argsort(centers[:, 0])
        c, r = centers[order, 0], radii[order]
        assert np.all(c[1:] - c[:-1] > r[1:] + r[:-1])


def test_counterexample_collision_named():
    # bypass the constructor bound to force overlapping balls
    params = CounterexampleParams()
    object.__setattr__(params, "c", 0.6)
    with pytest.raises(ValueError, match="intersect"):
        check_disjoint(params)


def test_counterexample_product_on_surviving_band():
    params = CounterexampleParams()
    sigma, family = make_counterexample(params)
    g = Grid(2 ** 16, 512 * math.pi)
    for ell in (3, 10):
        F = family.spectrum(ell, g).coeffs
        prod = sigma.multiplier()(g.xi) * F
        c = family.center(ell)
        expected = np.where(F != 0, sigma.multiplier()(g.xi), 0.0)
        mask = np.abs(g.xi - c) <= params.support * family.scale(ell)
        assert np.allclose(prod[mask], expected[mask])
        assert np.all(F[mask] == 1.0)
    zero = family.spectrum(0, g).coeffs
    assert zero[g.N // 2] == 1.0


def test_counterexample_seminorm_classes():
    params = CounterexampleParams()
    sigma, _ = make_counterexample(params)
    own = (0.0, params.alpha - params.eps, params.alpha - params.eps)
    stronger = (0.0, params.alpha, params.alpha)
    vals_own = [seminorm(sigma, 2, own, SymbolDomain(xi_window=W)) for W in (400.0, 1600.0)]
    vals_strong = [seminorm(sigma, 2, stronger, SymbolDomain(xi_window=W)) for W in (400.0, 1600.0)]
    assert vals_own[1] / vals_own[0] < 1.2
    assert vals_strong[1] / vals_strong[0] > 1.3


def test_lattice_inequality_spot_value():
    # n = 1, alpha = 1/2, k = 2, m = 1: LHS 5, RHS |6 - 2| = 4
    A = 1.0
    lhs = ((1 + 2) ** A + (1 + 1) ** A) * 1
    rhs = abs(3 * 2 - 2 * 1)
    assert lhs / rhs == 1.25
    rep = lattice_inequality_check(0.5, 1, bound=2)
    assert rep.passed and rep.K == 6.0


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.75])
def test_lattice_inequality_brute_force(alpha):
    for dim in (1, 2):
        rep = lattice_inequality_check(alpha, dim)
        assert rep.passed and rep.max_ratio <= rep.K


def test_parse_symbol_spec():
    assert parse_symbol_spec("counterexample:alpha=0.5,eps=0.25,c=0.0625") == (
        "counterexample", {"alpha": 0.5, "eps": 0.25, "c": 0.0625}
    )
    assert parse_symbol_spec("constant") == ("constant", {})
    with pytest.raises(ValueError):
        parse_symbol_spec("constant:value")
    with pytest.raises(ValueError, match="unknown symbol"):
        symbol_from_spec("nope")
    assert symbol_from_spec("constant:value=2").params["value"] == 2.0
