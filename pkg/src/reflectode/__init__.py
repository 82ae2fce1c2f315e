"""Green's-function solvers for the first order equation with reflection
``x'(t) + m x(-t) = h(t)`` on ``[-T, T]``.
"""

from ._errors import (
    BoundaryConditionError,
    CertificationError,
    DomainError,
    ExprEvaluationError,
    ExprSyntaxError,
    FunctionalResonanceError,
    InconclusiveError,
    OrientationError,
    QuadratureError,
    ReflectODEError,
    ResonanceError,
    ThresholdSearchError,
    UnknownIdentifierError,
)
from .functional import Measure, lebesgue, nonresonance_gap
from .kernel import KernelParams
from .positivity import PositivityReport, certify_positive, empirical_threshold, solution_bound
from .quad import QuadConfig, integrate
from .solver import (
    Antiperiodic,
    Functional,
    Lambda,
    Periodic,
    ProblemSpec,
    ReflectionBVP,
    Solution,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "Antiperiodic",
    "BoundaryConditionError",
    "CertificationError",
    "DomainError",
    "ExprEvaluationError",
    "ExprSyntaxError",
    "Functional",
    "FunctionalResonanceError",
    "InconclusiveError",
    "KernelParams",
    "Lambda",
    "Measure",
    "OrientationError",
    "Periodic",
    "PositivityReport",
    "ProblemSpec",
    "QuadConfig",
    "QuadratureError",
    "ReflectODEError",
    "ReflectionBVP",
    "ResonanceError",
    "Solution",
    "ThresholdSearchError",
    "UnknownIdentifierError",
    "certify_positive",
    "empirical_threshold",
    "integrate",
    "lebesgue",
    "nonresonance_gap",
    "solution_bound",
    "solve",
]
