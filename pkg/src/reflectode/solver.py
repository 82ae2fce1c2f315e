"""Green's-function solvers for ``x'(t) + m x(-t) = h(t)`` on ``[-T, T]``.

Boundary condition families:

* :class:`Periodic`      ``x(-T) = x(T)``
* :class:`Antiperiodic`  ``x(-T) + x(T) = 0``
* :class:`Lambda`        ``x(-T) - x(T) = lam``
* :class:`Functional`    ``F(x) = c`` for a :class:`~reflectode.functional.Measure` F

Every periodic-family solution has the form ``xi(h) + lam * gbar(., -T)``
where ``xi(h)(t) = int_I gbar(t, s) h(s) ds`` is the periodic solution and
``gbar(., -T)`` spans the solutions of the homogeneous equation.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import expr as _expr
from ._errors import DomainError, FunctionalResonanceError
from ._validation import check_finite, check_points, check_positive
from .functional import EPS_GAP, Measure, nonresonance_gap
from .kernel import KernelParams, gbar, gbar_minus_T, hbar
from .quad import QuadConfig, integrate

__all__ = [
    "Periodic",
    "Antiperiodic",
    "Lambda",
    "Functional",
    "ProblemSpec",
    "Solution",
    "xi",
    "antiperiodic_operator",
    "solve",
    "solve_periodic",
    "solve_antiperiodic",
    "solve_lambda",
    "solve_functional",
    "ReflectionBVP",
]


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class Antiperiodic:
    pass


@dataclass(frozen=True)
class Lambda:
    lam: float


@dataclass(frozen=True)
class Functional:
    F: Measure
    c: float


BoundaryCondition = Union[Periodic, Antiperiodic, Lambda, Functional]


@dataclass(frozen=True)
class ProblemSpec:
    m: float
    T: float
    h: object
    bc: BoundaryCondition = field(default_factory=Periodic)
    eps_res: float = 1e-9
    eps_gap: float = EPS_GAP

    def __post_init__(self):
        check_finite(self.m, "m")
        check_positive(self.T, "T")
        if isinstance(self.h, str):
            object.__setattr__(self, "h", _expr.parse(self.h))
        if isinstance(self.bc, Functional):
            self.bc.F.validate(self.T)

    @property
    def params(self):
        return KernelParams(self.m, self.T, eps_res=self.eps_res)

    @property
    def forcing(self):
        return _expr.as_function(self.h)

    def with_bc(self, bc):
        return ProblemSpec(self.m, self.T, self.h, bc, self.eps_res, self.eps_gap)

    def with_forcing(self, h):
        return ProblemSpec(self.m, self.T, h, self.bc, self.eps_res, self.eps_gap)


def _row_integral(kernel, h, t, p, cfg):
    T = p.T
    return integrate(
        lambda s: kernel(t, s, p) * np.asarray(h(s), dtype=float),
        -T, T, (-abs(t), abs(t)), cfg,
    )


def xi(h, t, p, cfg=None):
    """``int_I gbar(t, s) h(s) ds``: the periodic solution at a single ``t``."""
    p.require_periodic()
    t = float(check_points(t, p.T))
    return _row_integral(gbar, _expr.as_function(h), t, p, cfg)


def antiperiodic_operator(h, t, p, cfg=None):
    """``int_I hbar(t, s) h(s) ds``: the antiperiodic solution at a single ``t``."""
    p.require_antiperiodic()
    t = float(check_points(t, p.T))
    return _row_integral(hbar, _expr.as_function(h), t, p, cfg)


@dataclass(frozen=True)
class Solution:
    """Evaluable solution ``u``; each point costs one adaptive quadrature."""

    spec: ProblemSpec
    cfg: QuadConfig
    lambda_used: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)

    def _particular(self, t):
        p = self.spec.params
        h = self.spec.forcing
        if isinstance(self.spec.bc, Antiperiodic):
            return antiperiodic_operator(h, t, p, self.cfg)
        return xi(h, t, p, self.cfg)

    def evaluate(self, t):
        ts = check_points(t, self.spec.T)
        flat = np.array([self._particular(float(ti)) for ti in ts.ravel()])
        if self.lambda_used:
            flat = flat + self.lambda_used * gbar_minus_T(ts.ravel(), self.spec.params)
        out = flat.reshape(ts.shape)
        return float(out) if np.ndim(t) == 0 else out

    __call__ = evaluate


def solve_periodic(spec, cfg=None):
    cfg = cfg or QuadConfig()
    spec.params.require_periodic()
    return Solution(spec.with_bc(Periodic()), cfg, None, _diag(cfg))


def solve_antiperiodic(spec, cfg=None):
    cfg = cfg or QuadConfig()
    spec.params.require_antiperiodic()
    return Solution(spec.with_bc(Antiperiodic()), cfg, None, _diag(cfg))


def solve_lambda(spec, cfg=None):
    cfg = cfg or QuadConfig()
    spec.params.require_periodic()
    lam = float(spec.bc.lam)
    return Solution(spec, cfg, lam, _diag(cfg))


def solve_functional(spec, cfg=None):
    """Solve ``F(x) = c``; the free constant of ``xi(h) + lam * gbar(., -T)`` is fixed by F.

    ``F(xi(h))`` is an iterated integral: the outer application of F runs at
    a tolerance ten times looser than the inner kernel quadratures.
    """
    cfg = cfg or QuadConfig()
    p = spec.params.require_periodic()
    F, c = spec.bc.F, float(spec.bc.c)
    gap = nonresonance_gap(F, p, cfg)
    if abs(gap) <= spec.eps_gap:
        raise FunctionalResonanceError(
            f"F(cos mt) = F(sin mt) up to {spec.eps_gap:g} (gap {gap:.3e}); "
            "the functional problem has no unique solution"
        )
    h = spec.forcing
    F_xi_h = F.apply(
        lambda ts: np.array([xi(h, float(t), p, cfg) for t in np.atleast_1d(ts)]).reshape(np.shape(ts)),
        p.T,
        cfg.relaxed(10.0),
    )
    F_homog = gap / (2.0 * math.sin(p.alpha))
    lam = (c - F_xi_h) / F_homog
    diag = _diag(cfg, gap=gap, F_xi_h=F_xi_h, F_homogeneous=F_homog)
    return Solution(spec, cfg, lam, diag)


def _diag(cfg, **extra):
    return {"abs_tol": cfg.abs_tol, "rel_tol": cfg.rel_tol, **extra}


def solve(spec, cfg=None):
    """Dispatch on the boundary condition of ``spec``."""
    bc = spec.bc
    if isinstance(bc, Periodic):
        return solve_periodic(spec, cfg)
    if isinstance(bc, Antiperiodic):
        return solve_antiperiodic(spec, cfg)
    if isinstance(bc, Lambda):
        return solve_lambda(spec, cfg)
    if isinstance(bc, Functional):
        return solve_functional(spec, cfg)
    raise TypeError(f"unknown boundary condition {bc!r}")


class ReflectionBVP(BaseEstimator):
    """Estimator-style front end: ``fit`` on a forcing term, ``predict`` u(t).

    Parameters
    ----------
    m, T : float
        Equation coefficient and half-length of ``I = [-T, T]``.
    bc : {"periodic", "antiperiodic", "lambda", "functional"}
    lam : float
        Jump ``x(-T) - x(T)`` for ``bc="lambda"``.
    F : Measure or None
        Boundary functional for ``bc="functional"``; defaults to the
        Lebesgue measure on I.
    c : float
        Target value ``F(x) = c`` for ``bc="functional"``.
    abs_tol, rel_tol, max_depth :
        Quadrature settings.

    Attributes
    ----------
    solution_ : Solution
    lambda_used_ : float or None
    """

    def __init__(self, m=1.0, T=1.0, bc="periodic", lam=0.0, F=None, c=0.0,
                 abs_tol=1e-10, rel_tol=1e-10, max_depth=50):
        self.m = m
        self.T = T
        self.bc = bc
        self.lam = lam
        self.F = F
        self.c = c
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.max_depth = max_depth

    def _boundary_condition(self):
        if self.bc == "periodic":
            return Periodic()
        if self.bc == "antiperiodic":
            return Antiperiodic()
        if self.bc == "lambda":
            return Lambda(check_finite(self.lam, "lam"))
        if self.bc == "functional":
            from .functional import lebesgue

            F = lebesgue() if self.F is None else self.F
            return Functional(F, check_finite(self.c, "c"))
        raise DomainError(f"unknown bc {self.bc!r}")

    def fit(self, h, y=None):
        """Solve the boundary value problem with forcing ``h``.

        ``h`` may be expression text, a parsed expression or a vectorised
        callable.  ``y`` is ignored.
        """
        cfg = QuadConfig(self.abs_tol, self.rel_tol, self.max_depth)
        spec = ProblemSpec(self.m, self.T, h, self._boundary_condition())
        self.solution_ = solve(spec, cfg)
        self.lambda_used_ = self.solution_.lambda_used
        return self

    def predict(self, t):
        check_is_fitted(self, "solution_")
        return np.asarray(self.solution_.evaluate(np.atleast_1d(t)), dtype=float)
