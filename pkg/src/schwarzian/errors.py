"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(ToolkitError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownIdentifierError(ExprSyntaxError):
    pass


class MobiusDegenerateError(ToolkitError):
    """mobius(a, b, c, d) with ad - bc = 0."""


class EvalDomainError(ToolkitError):
    """Evaluation left the domain of analyticity."""


class PoleError(EvalDomainError):
    """A division jet hit a vanishing denominator."""


class BranchCutError(EvalDomainError):
    """log or sqrt evaluated on the nonpositive real axis."""


class CriticalPointError(EvalDomainError):
    """f' vanished where a Schwarzian or logarithmic derivative needed it."""


class DomainError(ToolkitError):
    """Arguments outside the documented domain of an operation."""


class IntegrationError(ToolkitError):
    """An integrator or quadrature failed to meet its tolerance."""


class RootIsolationError(ToolkitError):
    """Bisection could not separate the requested zeros."""


class ValenceCountError(ToolkitError):
    """Contour winding and located preimages disagree."""


class NormEstimationError(ToolkitError):
    """No valid sample survived a norm grid sweep."""
