"""Exception hierarchy for gkpforge.

Everything raised on purpose derives from GkpForgeError so callers can catch
one type at the boundary (the CLI maps it to a nonzero exit code).
"""


class GkpForgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(GkpForgeError, ValueError):
    """A Fock-space dimension or basis index is out of range."""


class UnsupportedGateError(GkpForgeError, ValueError):
    """A gate kind string is not one of the supported generators."""


class DimensionMismatchError(GkpForgeError, ValueError):
    """Operands live in truncated spaces of different sizes."""


class ConfigurationError(GkpForgeError, ValueError):
    """A parameter value is outside its documented domain."""


class ResourceLimitError(GkpForgeError):
    """A request would exceed a hard resource cap; the message names the cap."""


class CutoffTooSmallError(GkpForgeError):
    """The requested truncated basis cannot hold the state faithfully.

    ``required_cutoff`` carries an estimate of a dimension that would
    suffice, when one can be extrapolated.
    """

    def __init__(self, message: str, required_cutoff: int | None = None):
        super().__init__(message)
        self.required_cutoff = required_cutoff


class NonConvergedError(GkpForgeError):
    """An adaptive numeric routine failed its self-consistency check.

    Carries the disagreeing coarse and refined values so callers can judge
    how far apart they landed.
    """

    def __init__(self, message: str, coarse: float | None = None,
                 refined: float | None = None):
        super().__init__(message)
        self.coarse = coarse
        self.refined = refined


class GridResolutionError(GkpForgeError):
    """A sampling grid failed its normalization sanity check."""
