"""Closed-form Green's functions for ``x'(t) + m x(-t) = h(t)`` on [-T, T].

Everything is evaluated in scaled coordinates ``z = t/T``, ``y = s/T`` with
``alpha = m*T``.  Kernels are piecewise analytic on the four regions cut out
by the diagonals ``z = y`` and ``z = -y``:

    ABOVE  z > |y|        RIGHT  |z| < y
    BELOW  -|z| > y       LEFT   z < -|y|

On a diagonal a kernel is only defined as a one-sided limit.  All evaluators
take ``side=-1`` (the limit from ``s < t`` on ``z = y`` and from ``s < -t`` on
``z = -y``) or ``side=+1`` (the opposite limits).

All functions broadcast over numpy arrays and return a float for scalar input.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._errors import DomainError, ResonanceError
from ._validation import check_alpha_positivity_range, check_finite, check_positive

__all__ = [
    "EPS_GEOM",
    "KernelParams",
    "Region",
    "classify_region",
    "gbar",
    "gbar_minus_T",
    "h_kernel",
    "h_kernel_dt",
    "h_kernel_ds",
    "hbar",
    "phi_profile",
    "kernel_sup",
]

EPS_GEOM = 1e-12
_QUARTER_PI = math.pi / 4


@dataclass(frozen=True)
class KernelParams:
    """Equation coefficient ``m`` and half-length ``T`` of ``I = [-T, T]``.

    ``eps_res`` guards the divisions by ``sin(alpha)`` (periodic family) and
    ``cos(alpha)`` (antiperiodic family); ``eps_m`` guards the division by
    ``m`` in the oscillator kernel H.
    """

    m: float
    T: float
    eps_res: float = 1e-9
    eps_m: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "m", check_finite(self.m, "m"))
        object.__setattr__(self, "T", check_positive(self.T, "T"))
        check_positive(self.eps_res, "eps_res")
        check_positive(self.eps_m, "eps_m")

    @property
    def alpha(self):
        return self.m * self.T

    def require_periodic(self):
        """Raise unless m is away from k*pi/T."""
        if abs(math.sin(self.alpha)) <= self.eps_res:
            raise ResonanceError(
                f"periodic kernel does not exist: |sin(alpha)| <= {self.eps_res:g} "
                f"(alpha = m*T = {self.alpha!r} is too close to k*pi)"
            )
        return self

    def require_antiperiodic(self):
        """Raise unless m is away from (k + 1/2)*pi/T."""
        if abs(math.cos(self.alpha)) <= self.eps_res:
            raise ResonanceError(
                f"antiperiodic kernel does not exist: |cos(alpha)| <= {self.eps_res:g} "
                f"(alpha = m*T = {self.alpha!r} is too close to (k+1/2)*pi)"
            )
        return self


class Region(enum.IntEnum):
    ABOVE = 0
    RIGHT = 1
    BELOW = 2
    LEFT = 3
    DIAG = 4


def _result(value, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(value)
    return value


def _scaled(t, s, p):
    z = np.asarray(t, dtype=float) / p.T
    y = np.asarray(s, dtype=float) / p.T
    _check_unit_square(z, y)
    z, y = np.broadcast_arrays(np.clip(z, -1.0, 1.0), np.clip(y, -1.0, 1.0))
    return z, y


def _check_unit_square(z, y):
    lim = 1.0 + EPS_GEOM
    if np.abs(z).max(initial=0.0) > lim or np.abs(y).max(initial=0.0) > lim:
        raise DomainError("kernel arguments must lie in I x I")


def classify_region(z, y, eps_geom=EPS_GEOM):
    """Region of the scaled point ``(z, y)``; DIAG within ``eps_geom`` of ``z = +-y``."""
    z, y = float(z), float(y)
    _check_unit_square(z, y)
    if abs(z - y) <= eps_geom or abs(z + y) <= eps_geom:
        return Region.DIAG
    return Region(int(_resolve(z, y, -1)))


def _resolve(z, y, side):
    """Region codes with diagonal points pushed to ``side``; never DIAG."""
    if side not in (-1, 1):
        raise ValueError("side must be -1 or +1")
    near = (np.abs(z - y) <= EPS_GEOM) | (np.abs(z + y) <= EPS_GEOM)
    if np.any(near):
        y = np.where(near, y + side * 2 * EPS_GEOM, y)
    az = np.abs(z)
    return np.where(y >= az, 1, np.where(y <= -az, 2, np.where(z > 0, 0, 3)))


def gbar(t, s, p, side=-1):
    """Green's function of the periodic problem ``x(-T) = x(T)``."""
    p.require_periodic()
    z, y = _scaled(t, s, p)
    a = p.alpha
    q = _QUARTER_PI
    reg = _resolve(z, y, side)
    # region r: cos(zc[r] z + z0[r]) * cos(a y + y0[r]), order ABOVE, RIGHT, BELOW, LEFT
    zc = np.array([-a, a, a, a])
    z0 = np.array([a - q, q, q, a + q])
    y0 = np.array([-q, -a - q, a - q, -q])
    val = np.cos(zc[reg] * z + z0[reg]) * np.cos(a * y + y0[reg])
    return _result(val / math.sin(a), t, s)


def gbar_minus_T(t, p):
    """``gbar(t, -T)`` from its closed form ``(cos mt - sin mt) / (2 sin mT)``."""
    p.require_periodic()
    z, _ = _scaled(t, 0.0, p)
    a = p.alpha
    val = (np.cos(a * z) - np.sin(a * z)) / (2 * math.sin(a))
    return _result(val, t)


def _require_m(p):
    if abs(p.m) <= p.eps_m:
        raise DomainError(f"H is undefined for |m| <= {p.eps_m:g}")


def h_kernel(t, s, p):
    """Green's function H of ``x'' + m^2 x = 0`` with antiperiodic data."""
    p.require_antiperiodic()
    _require_m(p)
    z, y = _scaled(t, s, p)
    a = p.alpha
    val = np.where(y <= z, np.sin(a * (z - y - 1)), np.sin(a * (y - z - 1)))
    return _result(val / (2 * p.m * math.cos(a)), t, s)


def h_kernel_dt(t, s, p, side=-1):
    """Closed-form ``dH/dt``; on ``s = t`` the limit from ``s < t`` (side=-1)."""
    p.require_antiperiodic()
    _require_m(p)
    z, y = _scaled(t, s, p)
    a = p.alpha
    lower = _lower_branch(z, y, side)
    val = np.where(lower, np.cos(a * (z - y - 1)), -np.cos(a * (y - z - 1)))
    return _result(val / (2 * math.cos(a)), t, s)


def h_kernel_ds(t, s, p, side=-1):
    """Closed-form ``dH/ds``; on ``s = t`` the limit from ``s < t`` (side=-1)."""
    p.require_antiperiodic()
    _require_m(p)
    z, y = _scaled(t, s, p)
    a = p.alpha
    lower = _lower_branch(z, y, side)
    val = np.where(lower, -np.cos(a * (z - y - 1)), np.cos(a * (y - z - 1)))
    return _result(val / (2 * math.cos(a)), t, s)


def _lower_branch(z, y, side):
    if side not in (-1, 1):
        raise ValueError("side must be -1 or +1")
    on_diag = np.abs(z - y) <= EPS_GEOM
    return np.where(on_diag, side < 0, y < z)


def hbar(t, s, p, side=-1):
    """Green's function of the antiperiodic problem ``x(-T) + x(T) = 0``.

    Finite at ``m = 0`` (where it reduces to +-1/2), so only the
    ``cos(mT)`` resonance is rejected.
    """
    p.require_antiperiodic()
    z, y = _scaled(t, s, p)
    a = p.alpha
    reg = _resolve(z, y, side)
    # ABOVE/RIGHT use sin(a(y+z-1)), BELOW/LEFT sin(a(-y-z-1));
    # ABOVE/BELOW add cos(a(z-y-1)), RIGHT/LEFT subtract cos(a(y-z-1))
    sigma = np.array([1.0, 1.0, -1.0, -1.0])[reg]
    rho = np.array([1.0, -1.0, 1.0, -1.0])[reg]
    val = np.sin(a * (sigma * (y + z) - 1)) + rho * np.cos(a * (rho * (z - y) - 1))
    return _result(val / (2 * math.cos(a)), t, s)


def phi_profile(y, alpha):
    """``max_z gbar(z, y)`` in scaled coordinates, for alpha in (0, pi/4)."""
    check_alpha_positivity_range(alpha)
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) > 1.0 + EPS_GEOM):
        raise DomainError("phi_profile requires |y| <= 1")
    q = _QUARTER_PI
    a = alpha
    val = np.where(
        y_arr >= 0,
        np.cos(a * (y_arr - 1) + q) * np.cos(a * y_arr - q),
        np.cos(a * y_arr + q) * np.cos(a * (y_arr + 1) - q),
    )
    return _result(val / math.sin(a), y)


def kernel_sup(alpha):
    """``M = max gbar = (1 + csc alpha) / 2`` for alpha in (0, pi/4)."""
    check_alpha_positivity_range(alpha)
    return 0.5 * (1.0 + 1.0 / math.sin(alpha))
