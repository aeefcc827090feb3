import math

import numpy as np
from hypothesis import given, strategies as st

from alphamod._jets import Jet, multi_indices, point_jets

reals = st.floats(-2.0, 2.0, allow_nan=False)


def _var(x, order=4):
    return Jet.variable(np.array([x]), 0, order, 1)


def test_multi_indices_counts():
    assert len(list(multi_indices(1, 3))) == 4
    # (order + dim choose dim) in two variables
    assert len(list(multi_indices(2, 3))) == 10


@given(reals)
def test_sin_cos_derivatives(x):
    t = _var(x)
    s, c = t.sin(), t.cos()
    expected_s = [math.sin(x), math.cos(x), -math.sin(x), -math.cos(x), math.sin(x)]
    expected_c = [math.cos(x), -math.sin(x), -math.cos(x), math.sin(x), math.cos(x)]
    for n in range(5):
        assert math.isclose(s.derivative((n,))[0], expected_s[n], abs_tol=1e-12)
        assert math.isclose(c.derivative((n,))[0], expected_c[n], abs_tol=1e-12)


@given(reals)
def test_reciprocal_matches_closed_form(x):
    t = _var(x) * _var(x) + 1.0
    r = t.reciprocal()
    # d/dx (1 + x^2)^{-1} = -2x / (1 + x^2)^2
    assert math.isclose(r.derivative((1,))[0], -2 * x / (1 + x * x) ** 2, rel_tol=1e-12, abs_tol=1e-14)
    d2 = (6 * x * x - 2) / (1 + x * x) ** 3
    assert math.isclose(r.derivative((2,))[0], d2, rel_tol=1e-10, abs_tol=1e-12)


@given(reals, reals)
def test_product_rule(a, b):
    x = _var(a, 3)
    f = x.exp()
    g = (x * b).sin()
    h = f * g
    fd = [math.exp(a)] * 4
    gd = [math.sin(b * a), b * math.cos(b * a), -b * b * math.sin(b * a), -b ** 3 * math.cos(b * a)]
    for n in range(4):
        leibniz = sum(math.comb(n, j) * fd[j] * gd[n - j] for j in range(n + 1))
        assert math.isclose(h.derivative((n,))[0], leibniz, rel_tol=1e-10, abs_tol=1e-10)


def test_power_and_sqrt_two_variables():
    x, y = point_jets(np.array([[0.3, -1.2]]), 2, 2)
    r = (x * x + y * y + 1.0).sqrt()
    v = 1 + 0.09 + 1.44
    assert math.isclose(r.value[0], math.sqrt(v))
    assert math.isclose(r.derivative((1, 0))[0], 0.3 / math.sqrt(v))
    assert math.isclose(r.derivative((1, 1))[0], -0.3 * -1.2 / v ** 1.5)
    p = (x * x + 1.0).power(1.5)
    assert math.isclose(p.derivative((2, 0))[0], 3 * (1.09) ** 0.5 + 3 * 0.09 / (1.09) ** 0.5, rel_tol=1e-12)


def test_take_restricts_batch():
    t = Jet.variable(np.array([0.0, 1.0, 2.0]), 0, 2, 1)
    sub = t.take(np.array([False, True, True]))
    assert np.allclose(sub.value, [1.0, 2.0])
