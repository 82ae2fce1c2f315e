"""Input validation helpers used across the estimator and functional APIs."""

import math
import numbers

import numpy as np

from ._errors import DomainError

# Relative slack when checking that points lie in [-T, T].
_EDGE_SLACK = 1e-12


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_finite(value, name):
    if not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite real number, got {value!r}")
    return float(value)


def check_points(t, T, name="t"):
    """Return ``t`` as a float array clipped onto [-T, T].

    Points further than a relative 1e-12 outside the interval raise
    :class:`DomainError`; points inside that slack are snapped to the edge.
    """
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    slack = T * (1.0 + _EDGE_SLACK)
    if np.any(np.abs(arr) > slack):
        bad = arr[np.abs(arr) > slack].flat[0]
        raise DomainError(f"{name}={bad!r} lies outside I=[{-T!r}, {T!r}]")
    return np.clip(arr, -T, T)


def check_grid_size(n, name="grid_n", minimum=1):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {n!r}")
    return int(n)


def check_alpha_positivity_range(alpha):
    """Require alpha in the open interval (0, pi/4)."""
    if not (0.0 < alpha < math.pi / 4):
        raise DomainError(f"alpha = m*T must lie in (0, pi/4), got {alpha!r}")
    return float(alpha)
