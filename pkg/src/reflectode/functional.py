"""Boundary functionals ``F(x) = int_I x w dt + sum_i a_i x(t_i)``."""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import expr as _expr
from ._errors import DomainError
from .kernel import EPS_GEOM
from .quad import QuadConfig, integrate

__all__ = ["Measure", "lebesgue", "nonresonance_gap", "EPS_GAP"]

EPS_GAP = 1e-9


@dataclass(frozen=True)
class Measure:
    """Absolutely continuous part ``density`` plus point masses ``atoms``.

    ``atoms`` is a tuple of ``(location, weight)`` pairs.  Locations must be
    pairwise distinct; whether they lie in ``[-T, T]`` is checked by
    :meth:`validate` once T is known.
    """

    density: Optional[_expr.Expr] = None
    atoms: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        density = self.density
        if isinstance(density, str):
            density = _expr.parse(density)
        object.__setattr__(self, "density", density)
        atoms = tuple((float(t), float(a)) for t, a in self.atoms)
        for t, a in atoms:
            if not (math.isfinite(t) and math.isfinite(a)):
                raise DomainError(f"atom ({t!r}, {a!r}) is not finite")
        locs = sorted(t for t, _ in atoms)
        if any(b - a <= 0 for a, b in zip(locs, locs[1:])):
            raise DomainError("atom locations must be pairwise distinct")
        object.__setattr__(self, "atoms", atoms)

    def validate(self, T):
        for t, _ in self.atoms:
            if abs(t) > T * (1 + EPS_GEOM):
                raise DomainError(f"atom at t={t!r} lies outside [-{T!r}, {T!r}]")
        return self

    @property
    def is_lebesgue(self):
        """True for the plain length measure ``density = 1`` without atoms."""
        return (
            not self.atoms
            and isinstance(self.density, _expr.Num)
            and self.density.value == 1.0
        )

    def apply(self, x, T, cfg=None, breakpoints=()):
        """``F(x)`` for a vectorised callable ``x`` on ``[-T, T]``."""
        self.validate(T)
        total = 0.0
        if self.density is not None:
            w = self.density
            total += integrate(
                lambda t: np.asarray(x(t), dtype=float) * _expr.evaluate(w, t),
                -T, T, breakpoints, cfg,
            )
        for t, a in self.atoms:
            total += a * float(x(float(np.clip(t, -T, T))))
        return total

    def total_variation_bound(self, T, cfg=None):
        """``int_I |w| dt + sum |a_i|``, the total variation of this measure."""
        self.validate(T)
        tv = sum(abs(a) for _, a in self.atoms)
        if self.density is not None:
            w = self.density
            tv += integrate(lambda t: np.abs(_expr.evaluate(w, t)), -T, T, (), cfg)
        return tv

    def to_json(self):
        return {
            "density": None if self.density is None else _expr.to_source(self.density),
            "atoms": [{"t": t, "a": a} for t, a in self.atoms],
        }

    @classmethod
    def from_json(cls, doc):
        atoms = tuple((item["t"], item["a"]) for item in doc.get("atoms", ()))
        return cls(density=doc.get("density"), atoms=atoms)


def lebesgue():
    """``F(x) = int_I x dt``."""
    return Measure(density=_expr.Num(1.0))


def nonresonance_gap(F, p, cfg=None):
    """``F(cos m.) - F(sin m.)``; the functional problem is uniquely solvable iff nonzero."""
    m = p.m
    return F.apply(lambda t: np.cos(m * t) - np.sin(m * t), p.T, cfg)
