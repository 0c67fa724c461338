"""Exception hierarchy.

Validation problems derive from :class:`ValidationError` (a ``ValueError``)
and numerical failures from :class:`NumericalError` (an ``ArithmeticError``).
The CLI maps the first family to exit code 2 and the second to exit code 3.
"""


class ValidationError(ValueError):
    """Invalid input shape, value or configuration."""


class ConfigurationError(ValidationError):
    """A kernel or map was used in an invalid state (for example unfitted)."""


class DegenerateScaleError(ValidationError):
    """A data-dependent map produced a zero scale."""


class UnsupportedKernelError(ValidationError):
    """The requested operation needs a capability the kernel lacks."""


class NumericalError(ArithmeticError):
    """Base class for numerical failures.

    Parameters
    ----------
    message : str
        Human readable description.
    **report
        Extra diagnostics (residuals, condition estimates, iteration counts)
        serialised by the CLI as JSON on stderr.
    """

    def __init__(self, message, **report):
        super().__init__(message)
        self.report = {"error": type(self).__name__, "message": message, **report}


class IllConditionedError(NumericalError):
    """A linear system stayed singular after the maximal diagonal jitter."""


class ConvergenceError(NumericalError):
    """An iterative solver hit its iteration cap before reaching tolerance."""


class IsolatedQueryError(NumericalError):
    """A kernel-weighted average had a vanishing denominator."""
