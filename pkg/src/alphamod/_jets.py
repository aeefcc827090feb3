"""Truncated multivariate Taylor arithmetic.

A :class:`Jet` stores the Taylor coefficients of a smooth function of ``dim``
variables around a batch of base points, up to total order ``order``.  It is
used to produce exact partial derivatives of compositions (radial bumps,
quotients, powers) without finite differences.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def multi_indices(dim, order):
    """All multi-indices of ``dim`` entries with total order ``<= order``."""
    return [b for b in itertools.product(range(order + 1), repeat=dim) if sum(b) <= order]


class Jet:
    """Taylor coefficients ``c[..., beta]`` of a function near base points.

    ``coeffs`` has shape ``batch + (order + 1,) * dim``; entries with total
    index above ``order`` are kept at zero.
    """

    __slots__ = ("coeffs", "order", "dim")

    def __init__(self, coeffs, order, dim):
        self.coeffs = coeffs
        self.order = order
        self.dim = dim

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, value, order, dim):
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros(value.shape + (order + 1,) * dim, dtype=np.result_type(value, float))
        coeffs[(...,) + (0,) * dim] = value
        return cls(coeffs, order, dim)

    @classmethod
    def variable(cls, value, axis, order, dim):
        """The coordinate function ``xi_axis`` expanded around ``value``."""
        jet = cls.constant(value, order, dim)
        if order >= 1:
            idx = [0] * dim
            idx[axis] = 1
            jet.coeffs[(...,) + tuple(idx)] = 1.0
        return jet

    @property
    def value(self):
        return self.coeffs[(...,) + (0,) * self.dim]

    def derivative(self, beta):
        """Partial derivative ``d^beta`` at the base points."""
        beta = tuple(int(b) for b in np.atleast_1d(beta))
        if len(beta) != self.dim:
            raise ValueError(f"multi-index {beta} does not match dim={self.dim}")
        if sum(beta) > self.order:
            raise ValueError(f"order {sum(beta)} exceeds jet order {self.order}")
        factor = math.prod(math.factorial(b) for b in beta)
        return factor * self.coeffs[(...,) + beta]

    # arithmetic ---------------------------------------------------------

    def _wrap(self, coeffs):
        return Jet(coeffs, self.order, self.dim)

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(np.broadcast_to(other, self.value.shape), self.order, self.dim)

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            return self._wrap(self.coeffs * other[(...,) + (None,) * self.dim])
        idx = multi_indices(self.dim, self.order)
        batch = np.broadcast_shapes(self.value.shape, other.value.shape)
        dtype = np.result_type(self.coeffs, other.coeffs)
        out = np.zeros(batch + (self.order + 1,) * self.dim, dtype=dtype)
        for a in idx:
            ca = self.coeffs[(...,) + a]
            if not np.any(ca):
                continue
            for b in idx:
                if sum(a) + sum(b) > self.order:
                    continue
                target = tuple(i + j for i, j in zip(a, b))
                out[(...,) + target] += ca * other.coeffs[(...,) + b]
        return self._wrap(out)

    __rmul__ = __mul__

    def compose(self, derivs):
        """Return ``f(self)`` given ``derivs[n] = f^(n)(self.value)``."""
        if len(derivs) < self.order + 1:
            raise ValueError("not enough derivatives for the jet order")
        delta = self._wrap(self.coeffs.copy())
        delta.coeffs[(...,) + (0,) * self.dim] = 0.0
        result = Jet.constant(derivs[0], self.order, self.dim)
        power = None
        for n in range(1, self.order + 1):
            power = delta if power is None else power * delta
            result = result + power * (np.asarray(derivs[n]) / math.factorial(n))
        return result

    def reciprocal(self):
        u = self.value
        derivs = [(-1) ** n * math.factorial(n) / u ** (n + 1) for n in range(self.order + 1)]
        return self.compose(derivs)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other))

    def power(self, exponent):
        """``self ** exponent`` for a real exponent (base value must be positive)."""
        u = self.value
        derivs = []
        coef = 1.0
        for n in range(self.order + 1):
            derivs.append(coef * u ** (exponent - n))
            coef *= exponent - n
        return self.compose(derivs)

    def sqrt(self):
        return self.power(0.5)

    def cos(self):
        u = self.value
        cycle = [np.cos(u), -np.sin(u), -np.cos(u), np.sin(u)]
        return self.compose([cycle[n % 4] for n in range(self.order + 1)])

    def sin(self):
        u = self.value
        cycle = [np.sin(u), np.cos(u), -np.sin(u), -np.cos(u)]
        return self.compose([cycle[n % 4] for n in range(self.order + 1)])

    def exp(self):
        e = np.exp(self.value)
        return self.compose([e] * (self.order + 1))

    def take(self, mask):
        """Restrict the batch to ``mask`` (boolean or integer index)."""
        return self._wrap(self.coeffs[mask])


def point_jets(xi, order, dim):
    """Coordinate jets for base points ``xi`` (shape ``(...,)`` in 1D, ``(..., 2)`` in 2D)."""
    xi = np.asarray(xi, dtype=float)
    if dim == 1:
        return [Jet.variable(xi, 0, order, 1)]
    return [Jet.variable(xi[..., a], a, order, dim) for a in range(dim)]
