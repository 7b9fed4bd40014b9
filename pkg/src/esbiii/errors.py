"""Exception and warning types shared across the package."""


class EsbError(Exception):
    """Base class for errors raised by this package."""


class DomainError(EsbError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class MomentDoesNotExistError(DomainError):
    """A requested moment diverges for the given shape parameters."""


class BracketError(EsbError, ValueError):
    """A root-finding bracket does not contain a sign change."""


class NoBracketError(BracketError):
    """No sign-change bracket could be located for a score equation."""


class NonConvergenceError(EsbError, RuntimeError):
    """An iterative routine exhausted its budget without meeting tolerance."""


class DegenerateDataError(EsbError, ValueError):
    """The data admit no meaningful fit (constant sample, zero spread, ...)."""


class SmallSampleError(DegenerateDataError):
    """Fewer observations than the minimum the fitter accepts."""


class ParseError(EsbError, ValueError):
    """A data file could not be parsed.

    Attributes
    ----------
    line : int or None
        1-based line number of the offending record, when known.
    """

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DensityLimitWarning(RuntimeWarning):
    """The density was evaluated where it diverges and a saturated value was returned."""
