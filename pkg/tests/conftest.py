import math

import numpy as np
import pytest

from reflectode.functional import lebesgue
from reflectode.kernel import KernelParams
from reflectode.solver import Functional, ProblemSpec

SINH_HALF = math.sinh(0.5)
SIN_HALF = math.sin(0.5)


@pytest.fixture
def p_half():
    """m = 1, T = 1/2, so alpha = 1/2."""
    return KernelParams(1.0, 0.5)


def eqej1(c):
    """x' + x(-t) = e^t on [-1/2, 1/2] with int x = c."""
    return ProblemSpec(1.0, 0.5, "exp(t)", Functional(lebesgue(), c))


def eqej1_exact(t, c):
    """cosh t + a (cos t - sin t), a fixed by int cosh = 2 sinh(1/2), int (cos - sin) = 2 sin(1/2)."""
    a = (c - 2 * SINH_HALF) / (2 * SIN_HALF)
    t = np.asarray(t, dtype=float)
    return np.cosh(t) + a * (np.cos(t) - np.sin(t))
