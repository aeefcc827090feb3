"""Frequency coverings for alpha-modulation spaces.

The cover attached to ``0 <= alpha < 1`` is a smooth partition of unity
``{eta_k}`` indexed by ``k`` in the integer lattice.  Band ``k`` lives on a
ball centred at ``<k>^A k`` with radius proportional to ``<k>^A``, where
``A = alpha / (1 - alpha)`` and ``<k> = 1 + |k|``.  Bands therefore widen
polynomially with frequency: ``alpha = 0`` gives the uniform (modulation
space) cover, ``alpha -> 1`` approaches the dyadic one.

Construction: a radial plateau bump ``g_k`` of plateau radius
``C1 <k>^A`` is placed at every centre and the family is normalised by its
sum, ``eta_k = g_k / sum_j g_j``.  The plateaus cover the frequency window,
so the denominator never drops below one there and the partition of unity
holds up to rounding.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._jets import Jet, multi_indices, point_jets


def bracket(x, dim=1):
    """``<x> = 1 + |x|``; for ``dim=2`` the norm runs over the last axis."""
    return 1.0 + _norm(x, dim)


def _norm(xi, dim):
    xi = np.asarray(xi, dtype=float)
    if dim == 1:
        return np.abs(xi)
    return np.sqrt(np.sum(xi * xi, axis=-1))


def _bracket(k, dim):
    return 1.0 + _norm(k, dim)


# ---------------------------------------------------------------------------
# smooth transition and radial bump profile


def _h_derivs(t, order, steepness):
    """Derivatives of ``h(t) = exp(-steepness / t)`` (zero for ``t <= 0``)."""
    t = np.asarray(t, dtype=float)
    out = [np.zeros_like(t) for _ in range(order + 1)]
    pos = t > 0
    if not np.any(pos):
        return out
    u = 1.0 / t[pos]
    base = np.exp(-steepness * u)
    poly = np.polynomial.Polynomial([1.0])
    for n in range(order + 1):
        out[n][pos] = poly(u) * base
        # h^(n+1) = u^2 (s P_n(u) - P_n'(u)) exp(-s u)
        poly = np.polynomial.Polynomial([0.0, 0.0, 1.0]) * (steepness * poly - poly.deriv())
    return out


def smooth_step(t, order=0, steepness=1.0):
    """Smooth non-increasing step: 1 for ``t <= 0``, 0 for ``t >= 1``.

    Returns the list ``[T, T', ..., T^(order)]`` evaluated at ``t``.
    """
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, 0.0, 1.0)
    a_d = _h_derivs(1.0 - tc, order, steepness)
    b_d = _h_derivs(tc, order, steepness)
    # Taylor coefficients in t; d/dt h(1 - t) flips the sign of odd orders
    a = Jet(np.stack([(-1) ** n * a_d[n] / math.factorial(n) for n in range(order + 1)], axis=-1), order, 1)
    b = Jet(np.stack([b_d[n] / math.factorial(n) for n in range(order + 1)], axis=-1), order, 1)
    step = a / (a + b)
    out = [step.derivative((n,)) for n in range(order + 1)]
    inside = (t > 0) & (t < 1)
    out[0] = np.where(t <= 0, 1.0, np.where(t >= 1, 0.0, out[0]))
    for n in range(1, order + 1):
        out[n] = np.where(inside, out[n], 0.0)
    return out


@dataclass(frozen=True)
class BumpProfile:
    """Smooth radial bump ``phi0``: 1 on ``|xi| <= 1``, 0 on ``|xi| >= 2``.

    Analytic derivatives are available up to ``max_order``.  ``steepness``
    selects a member of the family of transitions (used to compare covers
    built from different profiles).
    """

    steepness: float = 1.0
    max_order: int = 4

    def radial(self, r, order=0):
        """``[phi0(r), phi0'(r), ...]`` for radii ``r >= 0``."""
        if order > self.max_order:
            raise ValueError(f"profile derivatives available up to order {self.max_order}")
        r = np.asarray(r, dtype=float)
        return smooth_step(r - 1.0, order, self.steepness)

    def __call__(self, xi, dim=1):
        return self.radial(_norm(xi, dim))[0]

    def jet(self, z, order):
        """Jet of ``phi0(|z|)`` from coordinate jets ``z`` (list, one per axis)."""
        dim = len(z)
        if dim == 1:
            zv = z[0].value
            r = z[0] * np.sign(zv)
            return r.compose(self.radial(np.abs(zv), order))
        rv = np.sqrt(sum(za.value ** 2 for za in z))
        out = Jet.constant(np.where(rv <= 1.0, 1.0, 0.0), order, dim)
        mid = (rv > 1.0) & (rv < 2.0)
        if np.any(mid):
            zs = [za.take(mid) for za in z]
            r2 = zs[0] * zs[0]
            for za in zs[1:]:
                r2 = r2 + za * za
            sub = r2.sqrt().compose(self.radial(rv[mid], order))
            out.coeffs[mid] = sub.coeffs
        return out


DEFAULT_PROFILE = BumpProfile()


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class CoverParams:
    """Parameters of an alpha-covering.

    ``C`` is the support constant: every ``eta_k`` lives in the ball of
    radius ``C <k>^A`` around ``<k>^A k``; it also scales the plateau bumps
    ``rho_k`` and ``kappa_k``.  ``None`` selects ``4 max(1, A + 1)``.
    """

    alpha: float
    dim: int = 1
    C: float | None = None
    k_max: int = 32

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.k_max < 1:
            raise ValueError("k_max must be a positive integer")
        if self.C is not None and not self.C > 1.0:
            raise ValueError(f"C must exceed 1, got {self.C}")

    @property
    def A(self):
        return self.alpha / (1.0 - self.alpha)

    @property
    def support_constant(self):
        if self.C is not None:
            return float(self.C)
        return 4.0 * max(1.0, self.A + 1.0)

    def to_dict(self):
        return {"alpha": self.alpha, "dim": self.dim, "C": self.support_constant, "k_max": self.k_max}


class Band(NamedTuple):
    """Restriction of a bump to a rectangular block of a frequency lattice."""

    k: tuple
    slices: tuple
    weights: np.ndarray


def _plateau_factor(params):
    """Smallest plateau factor ``C1`` whose plateau balls cover the window."""
    A = params.A
    if params.dim == 1:
        ks = np.arange(-params.k_max - 1, params.k_max + 1, dtype=float)
        c0 = _bracket(ks, 1) ** A * ks
        c1 = _bracket(ks + 1, 1) ** A * (ks + 1)
        ratio = (c1 - c0) / (_bracket(ks, 1) ** A + _bracket(ks + 1, 1) ** A)
        return float(max(ratio.max(), (A + 1.0) / 2.0))
    # cells near the axes are roughly (A + 1) <k>^A by <k>^A
    return 0.55 * math.sqrt((A + 1.0) ** 2 + 1.0)


class AlphaCover:
    """An alpha-covering ``{eta_k}`` on a truncated lattice.

    Instances are treated as immutable; band tables on frequency lattices
    are cached per lattice.
    """

    def __init__(self, params, profile=DEFAULT_PROFILE, plateau_factor=None):
        self.params = params
        self.profile = profile
        self.alpha = params.alpha
        self.dim = params.dim
        self.A = params.A
        self.C = params.support_constant
        n = params.k_max
        rng = range(-n, n + 1)
        if self.dim == 1:
            self.lattice = np.array([(k,) for k in rng], dtype=int)
        else:
            self.lattice = np.array(list(itertools.product(rng, rng)), dtype=int)
        self._keys = [tuple(int(v) for v in k) for k in self.lattice]
        self._index = {k: i for i, k in enumerate(self._keys)}
        kf = self.lattice.astype(float)
        self.scales = _bracket(kf if self.dim > 1 else kf[:, 0], self.dim) ** self.A
        self.centers = self.scales[:, None] * kf
        self.C1 = float(plateau_factor) if plateau_factor is not None else _plateau_factor(params)
        if 2.0 * self.C1 > self.C + 1e-12:
            raise ValueError(
                f"support constant C={self.C} is smaller than the bump support factor {2 * self.C1:.4f}"
            )
        self.support_radii = 2.0 * self.C1 * self.scales
        self._cache = {}
        self.overlap = self._overlap()

    # lattice helpers ----------------------------------------------------

    def __len__(self):
        return len(self.lattice)

    def _key(self, k):
        if np.ndim(k) == 0:
            return (int(k),)
        return tuple(int(v) for v in k)

    def index(self, k):
        key = self._key(k)
        if key not in self._index:
            raise KeyError(f"lattice index {key} is not retained (k_max={self.params.k_max})")
        return self._index[key]

    def center(self, k):
        c = self.centers[self.index(k)]
        return float(c[0]) if self.dim == 1 else c.copy()

    def scale(self, k):
        """``<k>^A``."""
        return float(self.scales[self.index(k)])

    @property
    def keys(self):
        return self._keys

    def _points(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.dim == 1:
            return xi, xi[..., None]
        if xi.shape[-1] != 2:
            raise ValueError("2D frequency points need a trailing axis of length 2")
        return xi, xi

    @property
    def covered_radius(self):
        """Radius of the frequency ball on which the plateaus are known to cover."""
        n = self.params.k_max
        return float(_bracket(n, 1) ** self.A * n)

    def digest(self):
        payload = json.dumps(
            {**self.params.to_dict(), "C1": self.C1, "steepness": self.profile.steepness},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # pointwise evaluation -----------------------------------------------

    def _offsets(self, i, xi_vec):
        return (xi_vec - self.centers[i]) / (self.C1 * self.scales[i])

    def bump(self, k, xi):
        """Un-normalised plateau bump ``g_k``."""
        _, xv = self._points(xi)
        i = self.index(k)
        return self.profile(self._offsets(i, xv), 2)

    def _candidates(self, xv):
        """Indices of bumps whose support meets the bounding box of ``xv``."""
        lo = xv.reshape(-1, xv.shape[-1]).min(axis=0)
        hi = xv.reshape(-1, xv.shape[-1]).max(axis=0)
        r = self.support_radii[:, None]
        hit = np.all((self.centers + r > lo) & (self.centers - r < hi), axis=1)
        return np.nonzero(hit)[0]

    def bump_sum(self, xi):
        _, xv = self._points(xi)
        total = np.zeros(xv.shape[:-1])
        for j in self._candidates(xv):
            total += self.profile(self._offsets(j, xv), 2)
        return total

    def eta(self, k, xi):
        _, xv = self._points(xi)
        i = self.index(k)
        g = self.profile(self._offsets(i, xv), 2)
        out = np.zeros_like(g)
        nz = g > 0
        if np.any(nz):
            out[nz] = g[nz] / self.bump_sum(xv[nz] if self.dim == 2 else xv[nz][:, 0])
        return out

    def rho(self, k, xi):
        """Plateau bump of radius ``C <k>^A`` (equal to 1 on the support of ``eta_k``)."""
        _, xv = self._points(xi)
        i = self.index(k)
        return self.profile((xv - self.centers[i]) / (self.C * self.scales[i]), 2)

    kappa = rho

    def eta_jet(self, k, xi, order):
        """Jet of ``eta_k`` at ``xi`` (exact partial derivatives up to ``order``)."""
        _, xv = self._points(xi)
        flat = xv.reshape(-1, xv.shape[-1])
        i = self.index(k)
        z = point_jets(flat if self.dim == 2 else flat[:, 0], order, self.dim)
        total = Jet.constant(np.zeros(len(flat)), order, self.dim)
        g_k = None
        for j in self._candidates(flat):
            zj = [(za - self.centers[j][a]) * (1.0 / (self.C1 * self.scales[j])) for a, za in enumerate(z)]
            gj = self.profile.jet(zj, order)
            total = total + gj
            if j == i:
                g_k = gj
        if g_k is None:
            out = Jet.constant(np.zeros(len(flat)), order, self.dim)
        else:
            # points outside every support: g_k vanishes, keep the quotient finite
            empty = total.value <= 0
            total.coeffs[empty] = 0.0
            total.coeffs[(empty,) + (0,) * self.dim] = 1.0
            out = g_k / total
        out.coeffs = out.coeffs.reshape(xv.shape[:-1] + out.coeffs.shape[1:])
        return out

    def eta_jets(self, xi, order):
        """Jets of every ``eta_k`` not vanishing identically on the points ``xi``.

        Returns a list of ``(k, jet)`` over flattened points; the normalising
        sum is expanded once and shared.
        """
        _, xv = self._points(xi)
        flat = xv.reshape(-1, xv.shape[-1])
        z = point_jets(flat if self.dim == 2 else flat[:, 0], order, self.dim)
        total = Jet.constant(np.zeros(len(flat)), order, self.dim)
        bumps = []
        for j in self._candidates(flat):
            d = np.linalg.norm(flat - self.centers[j], axis=1)
            idx = np.nonzero(d < self.support_radii[j])[0]
            if not len(idx):
                continue
            zj = [(za.take(idx) - self.centers[j][a]) * (1.0 / (self.C1 * self.scales[j])) for a, za in enumerate(z)]
            gj = self.profile.jet(zj, order)
            total.coeffs[idx] += gj.coeffs
            bumps.append((self.keys[j], idx, gj))
        empty = total.value <= 0
        total.coeffs[empty] = 0.0
        total.coeffs[(empty,) + (0,) * self.dim] = 1.0
        inv = total.reciprocal()
        out = []
        for k, idx, gj in bumps:
            full = Jet.constant(np.zeros(len(flat)), order, self.dim)
            full.coeffs[idx] = (gj * inv.take(idx)).coeffs
            out.append((k, full))
        return out

    def eta_derivative(self, k, xi, beta):
        beta = tuple(np.atleast_1d(beta).astype(int))
        return self.eta_jet(k, xi, sum(beta)).derivative(beta)

    # tables on a frequency lattice -----------------------------------------

    def bands(self, axes, kind="eta"):
        """Bands of ``eta_k`` / ``rho_k`` / ``kappa_k`` on a product lattice.

        ``axes`` is a tuple of ascending 1D frequency arrays (one per axis).
        Returns a list of :class:`Band`, one per retained ``k`` meeting the
        lattice; bands with empty support are omitted.
        """
        if kind == "kappa":
            kind = "rho"
        if kind not in ("eta", "rho"):
            raise ValueError(f"unknown band kind {kind!r}")
        axes = tuple(np.asarray(a, dtype=float) for a in axes)
        key = (kind,) + tuple((len(a), float(a[0]), float(a[-1])) for a in axes)
        if key not in self._cache:
            self._cache[key] = self._build_bands(axes, kind)
        return self._cache[key]

    def _build_bands(self, axes, kind):
        if len(axes) != self.dim:
            raise ValueError("lattice dimension does not match the cover")
        factor = self.C1 if kind == "eta" else self.C
        raw = []
        for i, k in enumerate(self.keys):
            c = self.centers[i]
            s = factor * self.scales[i]
            slices = []
            for a, ax in enumerate(axes):
                lo = np.searchsorted(ax, c[a] - 2 * s, side="right")
                hi = np.searchsorted(ax, c[a] + 2 * s, side="left")
                slices.append(slice(int(lo), int(hi)))
            if any(sl.stop <= sl.start for sl in slices):
                continue
            mesh = np.meshgrid(*[ax[sl] for ax, sl in zip(axes, slices)], indexing="ij")
            z = np.stack([(m - c[a]) / s for a, m in enumerate(mesh)], axis=-1)
            g = self.profile(z, 2)
            if not np.any(g):
                continue
            raw.append((k, tuple(slices), g))
        if kind == "rho":
            return [Band(k, sl, g) for k, sl, g in raw]
        total = np.zeros(tuple(len(a) for a in axes))
        for _, sl, g in raw:
            total[sl] += g
        out = []
        for k, sl, g in raw:
            denom = total[sl]
            w = np.divide(g, denom, out=np.zeros_like(g), where=denom > 0)
            out.append(Band(k, sl, w))
        return out

    # geometry -------------------------------------------------------------

    def _overlap(self):
        if self.dim == 1:
            c = self.centers[:, 0]
            r = self.support_radii
            events = sorted([(x, 1) for x in c - r] + [(x, -1) for x in c + r], key=lambda e: (e[0], e[1]))
            best = cur = 0
            for _, step in events:
                cur += step
                best = max(best, cur)
            return int(best)
        R = self.covered_radius
        ax = np.linspace(-R, R, 241)
        pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
        count = np.zeros(len(pts), dtype=int)
        for j in range(len(self.lattice)):
            count += np.linalg.norm(pts - self.centers[j], axis=1) < self.support_radii[j]
        return int(count.max())

    def uncovered(self, window, samples=20001):
        """Sample points of the window ``|xi| <= window`` not inside any plateau."""
        if self.dim == 1:
            pts = np.linspace(-window, window, samples)
            pts_v = pts[:, None]
        else:
            m = int(math.sqrt(samples)) | 1
            ax = np.linspace(-window, window, m)
            pts_v = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
            pts_v = pts_v[np.linalg.norm(pts_v, axis=1) <= window]
            pts = pts_v
        best = np.zeros(len(pts_v))
        for j in range(len(self.lattice)):
            d = np.linalg.norm(pts_v - self.centers[j], axis=1) / (self.C1 * self.scales[j])
            best = np.maximum(best, (d <= 1.0).astype(float))
        return pts[best < 1.0]


def make_cover(params, profile=None, window=None, plateau_factor=None):
    """Build an :class:`AlphaCover` and check that it covers ``|xi| <= window``.

    ``window`` defaults to the radius guaranteed by the lattice truncation.
    Raises ``ValueError`` listing uncovered frequencies when the lattice is
    too small.
    """
    cover = AlphaCover(params, profile or DEFAULT_PROFILE, plateau_factor)
    check = cover.covered_radius if window is None else float(window)
    bad = cover.uncovered(check)
    if len(bad):
        raise ValueError(
            f"k_max={params.k_max} does not cover |xi| <= {check:g}; "
            f"{len(bad)} uncovered sample(s), e.g. xi={np.asarray(bad[0]).tolist()}"
        )
    return cover


def cover_for_window(alpha, window, dim=1, C=None, profile=None):
    """Smallest-``k_max`` cover whose plateaus cover ``|xi| <= window``."""
    A = alpha / (1.0 - alpha)
    k = 1
    while _bracket(k, 1) ** A * k < window:
        k += 1
    return make_cover(CoverParams(alpha, dim, C, k + 1), profile)


def eval_eta(cover, k, xi):
    return cover.eta(k, xi)


def eval_rho(cover, k, xi):
    return cover.rho(k, xi)


def eval_kappa(cover, k, xi):
    return cover.kappa(k, xi)


# ---------------------------------------------------------------------------
# uniform partition used for x-frequency localisation


class UniformPartition:
    """The ``alpha = 0`` partition ``{phi(. - l)}`` with ``supp phi`` in ``|xi| <= sqrt(n)``."""

    def __init__(self, dim=1, profile=DEFAULT_PROFILE):
        self.dim = dim
        self.profile = profile
        self.r0 = math.sqrt(dim) / 2.0

    def _g(self, z):
        return self.profile(z / self.r0, 2)

    def phi(self, ell, zeta):
        zeta = np.asarray(zeta, dtype=float)
        if self.dim == 1:
            zv = zeta[..., None]
            ell = np.atleast_1d(ell).astype(float)
        else:
            zv = zeta
            ell = np.asarray(ell, dtype=float)
        num = self._g(zv - ell)
        out = np.zeros(zv.shape[:-1])
        nz = num > 0
        if not np.any(nz):
            return out
        zs = zv[nz]
        base = np.floor(zs)
        total = np.zeros(len(zs))
        for off in itertools.product(range(-2, 3), repeat=self.dim):
            total += self._g(zs - (base + np.array(off, dtype=float)))
        out[nz] = num[nz] / total
        return out

    def support_indices(self, zeta_min, zeta_max):
        """Integer ``l`` whose ``phi_l`` can be nonzero on ``[zeta_min, zeta_max]`` (1D)."""
        r = math.sqrt(self.dim)
        return range(int(math.floor(zeta_min - r)), int(math.ceil(zeta_max + r)) + 1)


# ---------------------------------------------------------------------------
# verification


@dataclass
class CoverReport:
    alpha: float
    k_max: int
    window: float
    partition_defect: float
    overlap: int
    min_denominator: float
    derivative_constants: list = field(default_factory=list)
    support_violations: list = field(default_factory=list)
    tolerance: float = 1e-10

    @property
    def passed(self):
        return self.partition_defect <= self.tolerance and not self.support_violations

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "k_max": self.k_max,
            "window": self.window,
            "partition_defect": self.partition_defect,
            "overlap": self.overlap,
            "min_denominator": self.min_denominator,
            "derivative_constants": self.derivative_constants,
            "support_violations": self.support_violations,
            "passed": self.passed,
        }


_FD_STENCILS = {
    0: ([0], [1.0]),
    1: ([-1, 1], [-0.5, 0.5]),
    2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
    3: ([-2, -1, 1, 2], [-0.5, 1.0, -1.0, 0.5]),
    4: ([-2, -1, 0, 1, 2], [1.0, -4.0, 6.0, -4.0, 1.0]),
}


def finite_difference(func, xi, beta, h):
    """Central finite-difference estimate of ``d^beta func`` at ``xi``.

    ``xi`` has a trailing axis of length ``len(beta)``; ``h`` broadcasts
    against the batch shape.
    """
    xi = np.asarray(xi, dtype=float)
    h = np.asarray(h, dtype=float)
    beta = tuple(int(b) for b in beta)
    stencils = [_FD_STENCILS[b] for b in beta]
    total = 0.0
    for combo in itertools.product(*[range(len(s[0])) for s in stencils]):
        shift = np.zeros(xi.shape)
        weight = 1.0
        for a, idx in enumerate(combo):
            off, w = stencils[a]
            shift[..., a] = off[idx]
            weight *= w[idx]
        total = total + weight * func(xi + shift * h[..., None])
    return total / h ** sum(beta)


def verify_cover(cover, window=None, orders=3, samples=20001, per_band=401):
    """Check the three defining properties of the cover on a sampled window.

    Returns a :class:`CoverReport`; a broken invariant yields a failing
    report rather than an exception.
    """
    window = cover.covered_radius if window is None else float(window)
    dim = cover.dim
    if dim == 1:
        pts = np.linspace(-window, window, samples)[:, None]
    else:
        m = int(math.sqrt(samples)) | 1
        ax = np.linspace(-window, window, m)
        pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    total = np.zeros(len(pts))
    denom = np.zeros(len(pts))
    violations = []
    for i, k in enumerate(cover.keys):
        g = cover.profile(cover._offsets(i, pts), 2)
        denom += g
        d = np.linalg.norm(pts - cover.centers[i], axis=1)
        outside = (d > cover.C * cover.scales[i]) & (g != 0)
        if np.any(outside):
            violations.append({"k": list(k), "xi": np.asarray(pts[outside][0]).tolist()})
    for i, k in enumerate(cover.keys):
        g = cover.profile(cover._offsets(i, pts), 2)
        total += np.divide(g, denom, out=np.zeros_like(g), where=denom > 0)
    defect = float(np.max(np.abs(total - 1.0)))
    covered = denom > 0
    min_denom = float(denom[covered].min()) if np.any(covered) else 0.0

    constants = []
    def eta_fn(i):
        def f(x):
            flat = x.reshape(-1, dim)
            g = cover.profile(cover._offsets(i, flat), 2)
            s = np.zeros(len(flat))
            for j in cover._candidates(flat):
                s += cover.profile(cover._offsets(j, flat), 2)
            return np.divide(g, s, out=np.zeros_like(g), where=s > 0).reshape(x.shape[:-1])
        return f

    betas = [b for b in multi_indices(dim, orders) if 0 < sum(b)]
    sup = {b: 0.0 for b in betas}
    for i, k in enumerate(cover.keys):
        # the outer ring has no neighbours beyond the truncation; skip it
        if max(abs(v) for v in k) > cover.params.k_max - 2:
            continue
        r = cover.support_radii[i]
        if dim == 1:
            local = cover.centers[i] + np.linspace(-r, r, per_band)[:, None]
        else:
            m = int(math.sqrt(per_band)) | 1
            ax = np.linspace(-r, r, m)
            local = cover.centers[i] + np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
        h = cover.scales[i] * 1e-3
        f = eta_fn(i)
        for b in betas:
            val = np.abs(finite_difference(f, local, b, h)).max() * cover.scales[i] ** sum(b)
            sup[b] = max(sup[b], float(val))
    for b in betas:
        constants.append({"beta": list(b), "C_prime": sup[b]})
    return CoverReport(
        alpha=cover.alpha,
        k_max=cover.params.k_max,
        window=window,
        partition_defect=defect,
        overlap=cover.overlap,
        min_denominator=min_denom,
        derivative_constants=constants,
        support_violations=violations,
    )
