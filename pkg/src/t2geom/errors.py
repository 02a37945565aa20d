"""Exception hierarchy shared by all modules."""


class T2GeomError(Exception):
    """Base class for all package errors."""


class DomainError(T2GeomError):
    """A primitive was evaluated outside its domain (e.g. 1/0, sqrt of a negative)."""


class ChartMismatch(T2GeomError):
    """Operands live on charts of different dimension."""


class DegreeError(T2GeomError):
    """A form of unsupported or mismatched degree was supplied."""


class ConstraintError(T2GeomError):
    """A user-supplied component contradicts a structural constraint."""


class InvalidConnection(T2GeomError):
    """The supplied vector 1-form is not a connection of the requested type."""


class PreconditionFailed(T2GeomError):
    """A verified precondition does not hold; carries the offending residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoSolution(T2GeomError):
    """The constraint system of a decomposition is infeasible."""


class ValidationFailed(T2GeomError):
    """A constructed object failed one of its postcondition checks."""


class TypeMismatch(T2GeomError):
    """Connection / semi-spray types do not match."""


class NotRegular(T2GeomError):
    """The linear connection is not J1-/J2-regular as required."""


class InvalidForm(T2GeomError):
    """The 2-form fails the Finslerian-form invariants."""


class NotSpray(T2GeomError):
    """The vector field is not a (semi-)spray of the requested type."""


class ClosednessFailed(T2GeomError):
    """A required d_{J2}-closedness precondition fails."""


class SingularForm(T2GeomError):
    """The skew matrix of the form is rank deficient at some point."""


class SchemaError(T2GeomError):
    """A JSON definition violates the expected schema; names the offending node."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class ParseError(T2GeomError):
    """Input file could not be parsed."""
