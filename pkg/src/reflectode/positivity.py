"""Positivity constants and certificates for the functional problem ``F(x) = c``.

For ``alpha = m T`` in (0, pi/4) the periodic kernel is positive with
maximum ``M = (1 + csc alpha) / 2`` and the solution is positive as soon as
``c > k1 = 2 M |mu|(I) ||h||_1 / (1 - tan alpha)``.  For the Lebesgue
functional the sharper ``k2 = (1 + 2M / (cot alpha - 1)) ||h||_1 / m``
applies.  Every certificate is re-checked on a grid.
"""

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import kernel as K
from ._errors import (
    CertificationError,
    InconclusiveError,
    OrientationError,
    ThresholdSearchError,
)
from ._validation import check_alpha_positivity_range, check_grid_size
from .functional import nonresonance_gap
from .quad import QuadConfig, integrate
from .solver import Functional, solve_functional

__all__ = [
    "Ordering",
    "PositivityReport",
    "k1_constant",
    "k2_constant",
    "ratio_f",
    "gbar_minusT_extrema",
    "midpoint_compare",
    "h_norm1",
    "solution_bound",
    "certify_positive",
    "empirical_threshold",
]

EPS_GEOM = 1e-12
_SUP_MARGIN = 1e-6


def k1_constant(alpha, tv_mu, h_norm1):
    check_alpha_positivity_range(alpha)
    return 2.0 * K.kernel_sup(alpha) * tv_mu * h_norm1 / (1.0 - math.tan(alpha))


def k2_constant(alpha, h_norm1, m):
    """Threshold for the Lebesgue functional ``F(x) = int_I x``."""
    check_alpha_positivity_range(alpha)
    if not m > 0:
        raise ValueError(f"k2 requires m > 0, got {m!r}")
    M = K.kernel_sup(alpha)
    return (1.0 + 2.0 * M / (1.0 / math.tan(alpha) - 1.0)) * h_norm1 / m


def ratio_f(alpha):
    """``k2 / k1`` for the Lebesgue functional; decreases from 1 to 2/pi."""
    check_alpha_positivity_range(alpha)
    return (1.0 + 1.0 / math.cos(alpha)) / (1.0 + 1.0 / math.sin(alpha)) / (2.0 * alpha)


def gbar_minusT_extrema(alpha):
    """(min, max) over I of ``gbar(t, -T)``: ``((cot a - 1)/2, (cot a + 1)/2)``."""
    check_alpha_positivity_range(alpha)
    cot = 1.0 / math.tan(alpha)
    return 0.5 * (cot - 1.0), 0.5 * (cot + 1.0)


class Ordering(enum.Enum):
    LESS = "<"
    GREATER = ">"


def midpoint_compare(peak, g_a, g_b, eps_geom=EPS_GEOM):
    """Order ``f(g_a)`` against ``f(g_b)`` for f symmetric about ``peak`` and
    decreasing away from it, where ``g_a, g_b`` are the endpoint values of an
    affine map.  f itself is never evaluated.
    """
    mid = 0.5 * (g_a + g_b)
    for name, v in (("g(a)", g_a), ("g(b)", g_b), ("g((a+b)/2)", mid)):
        if abs(v - peak) <= eps_geom:
            raise InconclusiveError(f"{name} = {v!r} coincides with the peak {peak!r}")
    if g_a < peak and g_b < peak:
        return Ordering.LESS if g_a < g_b else Ordering.GREATER
    if g_a > peak and g_b > peak:
        return Ordering.LESS if g_b < g_a else Ordering.GREATER
    if g_a < peak < g_b:
        return Ordering.LESS if mid < peak else Ordering.GREATER
    return Ordering.LESS if mid > peak else Ordering.GREATER


def h_norm1(spec, cfg=None):
    h = spec.forcing
    return integrate(lambda t: np.abs(h(t)), -spec.T, spec.T, (), cfg)


def _require_functional(spec):
    if not isinstance(spec.bc, Functional):
        raise TypeError("positivity analysis needs a Functional boundary condition")


def _row_sup(t, p, n=1001):
    """``sup_s |gbar(t, s)|`` on an n-point grid plus both one-sided diagonal limits."""
    T = p.T
    s = np.concatenate([np.linspace(-T, T, n), [t, -t]])
    vals = np.abs(K.gbar(t, s, p, side=-1))
    vals_up = np.abs(K.gbar(t, s[-2:], p, side=1))
    return max(vals.max(), vals_up.max()) + _SUP_MARGIN


def _square_sup(p, n=401):
    T = p.T
    g = np.linspace(-T, T, n)
    tt, ss = np.meshgrid(g, g, indexing="ij")
    sup = max(np.abs(K.gbar(tt, ss, p, side=-1)).max(), np.abs(K.gbar(tt, ss, p, side=1)).max())
    if 0 < p.alpha < math.pi / 4:
        # the kernel is positive there, so its sup norm is M
        sup = max(sup, K.kernel_sup(p.alpha))
    return sup + _SUP_MARGIN


def solution_bound(t, spec, cfg=None):
    """A priori bound on ``|u(t)|`` through ``|c|``, ``|mu|(I)`` and ``||h||_1``."""
    _require_functional(spec)
    cfg = cfg or QuadConfig()
    p = spec.params.require_periodic()
    F, c = spec.bc.F, spec.bc.c
    F_homog = nonresonance_gap(F, p, cfg) / (2.0 * math.sin(p.alpha))
    tv = F.total_variation_bound(p.T, cfg)
    hn = h_norm1(spec, cfg)
    sup_all = _square_sup(p)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    ratio = np.abs(K.gbar_minus_T(ts, p) / F_homog)
    rows = np.array([_row_sup(float(ti), p) for ti in ts])
    bound = abs(c) * ratio + (rows + ratio * sup_all * tv) * hn
    return float(bound[0]) if np.ndim(t) == 0 else bound


@dataclass
class PositivityReport:
    alpha: float
    M: float
    k1: Optional[float]
    k2: Optional[float]
    tv_mu: float
    h_norm1: float
    c: float
    gap: float
    certified: bool
    min_u_on_grid: float
    empirical_threshold: Optional[float] = None

    def to_json(self):
        return asdict(self)


def _check_orientation(spec, cfg):
    p = spec.params
    check_alpha_positivity_range(p.alpha)
    p.require_periodic()
    gap = nonresonance_gap(spec.bc.F, p, cfg)
    if not gap > spec.eps_gap:
        raise OrientationError(
            f"positivity estimates need F(cos mt) > F(sin mt); got gap {gap:.6g}"
        )
    return gap


def certify_positive(spec, cfg=None, grid_n=2001):
    """Decide ``c > k1`` (or ``c > k2`` for the Lebesgue functional) and
    cross-check the grid minimum of the solution."""
    _require_functional(spec)
    cfg = cfg or QuadConfig()
    grid_n = check_grid_size(grid_n, minimum=2)
    gap = _check_orientation(spec, cfg)
    p = spec.params
    F, c = spec.bc.F, float(spec.bc.c)
    tv = F.total_variation_bound(p.T, cfg)
    hn = h_norm1(spec, cfg)
    k1 = k1_constant(p.alpha, tv, hn)
    k2 = k2_constant(p.alpha, hn, p.m) if F.is_lebesgue else None
    certified = c > k1 or (k2 is not None and c > k2)

    sol = solve_functional(spec, cfg)
    u_min = float(np.min(sol.evaluate(np.linspace(-p.T, p.T, grid_n))))
    if certified and not u_min > 0:
        raise CertificationError(
            f"c = {c!r} exceeds the positivity threshold but min u = {u_min!r} on the grid"
        )
    return PositivityReport(
        alpha=p.alpha, M=K.kernel_sup(p.alpha), k1=k1, k2=k2, tv_mu=tv, h_norm1=hn,
        c=c, gap=gap, certified=certified, min_u_on_grid=u_min,
    )


def _golden_min(f, a, b, iters=60):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if b - a < 1e-12:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    return min(f1, f2, f(a), f(b))


def empirical_threshold(spec, cfg=None, grid_n=4001, tol=1e-8, bracket_limit=1e10):
    """Smallest ``c`` with ``min u_c >= 0``, by bisection on c.

    Uses ``u_c = u_0 + c w`` with ``w = gbar(., -T) / F(gbar(., -T))``: the
    minimum is taken over a ``grid_n``-point grid and refined by golden-section
    search between the neighbours of the grid argmin.  The value of
    ``spec.bc.c`` is ignored.
    """
    _require_functional(spec)
    cfg = cfg or QuadConfig()
    grid_n = check_grid_size(grid_n, minimum=3)
    p = spec.params.require_periodic()
    sol0 = solve_functional(spec.with_bc(Functional(spec.bc.F, 0.0)), cfg)
    F_homog = sol0.diagnostics["F_homogeneous"]
    grid = np.linspace(-p.T, p.T, grid_n)
    u0 = sol0.evaluate(grid)
    w = K.gbar_minus_T(grid, p) / F_homog

    def min_u(c):
        vals = u0 + c * w
        k = int(np.argmin(vals))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid_n - 1)]
        refined = _golden_min(lambda t: sol0.evaluate(t) + c * K.gbar_minus_T(t, p) / F_homog, lo, hi)
        return min(float(vals[k]), refined)

    hi = 1.0
    while min_u(hi) < 0:
        hi *= 10.0
        if hi > bracket_limit:
            raise ThresholdSearchError(f"solution is not positive for any c <= {bracket_limit:g}")
    lo = -1.0
    while min_u(lo) >= 0:
        lo *= 10.0
        if lo < -bracket_limit:
            raise ThresholdSearchError(f"solution is positive for every c >= {-bracket_limit:g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if min_u(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return hi
