"""Exception taxonomy shared by all modules.

Argument and configuration problems derive from ValueError so they behave
like ordinary Python precondition failures; numerical-resolution problems
derive from RuntimeError because retrying with a finer grid can fix them.
"""


class DiracLabError(Exception):
    """Common base for everything raised on purpose by this package."""


class DataError(DiracLabError, ValueError):
    """Operator data is malformed (non-finite samples, bad parameters)."""


class DomainError(DiracLabError, ValueError):
    """An argument is outside the operation's domain."""


class ConfigError(DiracLabError, ValueError):
    """An experiment configuration file cannot be used."""


class UnsupportedOrderError(DiracLabError, ValueError):
    """Requested expansion order is not implemented."""


class ResolutionError(DiracLabError, RuntimeError):
    """The requested grids cannot resolve the computation."""


class InstabilityError(ResolutionError):
    """An integration left its invariant region; the step is too coarse."""


class ModelError(DiracLabError, RuntimeError):
    """A model solve (gap conditions, extrapolation) failed its checks."""
