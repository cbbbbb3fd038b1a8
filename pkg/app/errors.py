"""
Error hierarchy for Wind Causality Studio

Every failure raised by the geometry, engine and scenario layers derives from
WindCausalityError so callers (CLI, API, tasks) can map it to an exit code or
an HTTP status without inspecting messages.
"""

from typing import List, Optional


class WindCausalityError(Exception):
    """Base class for all studio errors"""

    exit_code = 3


class UsageError(WindCausalityError):
    """Bad command-line usage or request parameters"""

    exit_code = 1


class ConfigError(UsageError):
    """Scenario configuration could not be parsed or validated"""

    def __init__(self, diagnostics: List["Diagnostic"]):
        self.diagnostics = list(diagnostics)
        text = "; ".join(str(d) for d in self.diagnostics) or "invalid configuration"
        super().__init__(text)


class Diagnostic:
    """A single configuration problem with its location"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.column}: {self.message}"

    def to_dict(self) -> dict:
        return {"message": self.message, "line": self.line, "column": self.column}


class ExpressionError(UsageError):
    """Field expression outside the whitelisted grammar, or non-total"""

    def __init__(self, message: str, column: Optional[int] = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class ConfigurationError(UsageError):
    """Numerics that cannot run as requested, e.g. a CFL violation"""


class InapplicableError(UsageError):
    """Operation does not apply to this scenario"""


class InsufficientHorizonError(UsageError):
    """A reachability family is too short for the requested parameter length"""


class OutOfDomainError(UsageError):
    """Point lies outside the domain or inside an excluded region"""


class NumericalFailureError(WindCausalityError):
    """A numerical method failed to converge"""

    exit_code = 2

    def __init__(self, message: str, residual: Optional[float] = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)


class BoundaryProximityError(NumericalFailureError):
    """Finite-difference stencil reaches outside the conic domain"""


class EmptyIndicatrixError(NumericalFailureError):
    """Too few admissible directions to sample an indicatrix"""


class DegenerateDirectionError(NumericalFailureError):
    """Velocity lies on the lightlike boundary of the admissible cone"""


class StiffnessError(NumericalFailureError):
    """Adaptive integrator step collapsed"""


class InvariantViolationError(WindCausalityError):
    """An internal consistency check failed"""

    exit_code = 3


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the CLI exit code

    Args:
        error: Raised exception

    Returns:
        int: 1 for usage/config errors, 2 for numerical failures, 3 otherwise
    """
    if isinstance(error, WindCausalityError):
        return error.exit_code
    return 3
