"""Exception hierarchy shared by every module."""


class ReflectODEError(Exception):
    """Base class for all package errors."""


class DomainError(ReflectODEError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ResonanceError(ReflectODEError):
    """The requested Green's function does not exist for these parameters."""


class FunctionalResonanceError(ResonanceError):
    """The boundary functional does not separate cos(m t) from sin(m t)."""


class OrientationError(DomainError):
    """F(cos m t) <= F(sin m t) where a positive gap is required."""


class QuadratureError(ReflectODEError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ExprSyntaxError(ReflectODEError, ValueError):
    """Malformed expression text.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifierError(ExprSyntaxError):
    """An identifier that is neither the variable, a constant nor a function."""


class ExprEvaluationError(ReflectODEError, ArithmeticError):
    """Evaluation left the natural domain (pole, log of non-positive, ...)."""


class BoundaryConditionError(ReflectODEError, ValueError):
    """A manufactured solution does not satisfy its boundary condition."""


class CertificationError(ReflectODEError):
    """A positivity certificate was contradicted by direct grid evaluation."""


class ThresholdSearchError(ReflectODEError):
    """No sign change of the solution minimum was found while bracketing c."""


class InconclusiveError(ReflectODEError):
    """The midpoint comparison rule cannot decide (a value sits on the peak)."""
