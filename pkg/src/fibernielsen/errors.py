"""Exception hierarchy shared by the library and the CLI."""


class NielsenError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(NielsenError, ValueError):
    pass


class GroupMismatchError(NielsenError, ValueError):
    pass


class InfiniteGroupError(NielsenError):
    """Raised when an operation needs a finite group but got one of positive rank."""


class IllDefinedEndomorphismError(NielsenError, ValueError):
    """A matrix does not send relations to relations."""


class NotInvertibleError(NielsenError, ValueError):
    pass


class NotUnimodularError(NielsenError, ValueError):
    pass


class NotInvolutionError(NielsenError, ValueError):
    pass


class IncompatibleInputError(NielsenError):
    """Mathematically inconsistent problem data (maps do not respect the gluings)."""


class LatticeNotPreservedError(IncompatibleInputError):
    pass


class NonIntertwiningError(IncompatibleInputError):
    pass


class RankExceedsAnalyzerError(NielsenError):
    pass


class UndeterminedCensusError(NielsenError):
    pass


class CensusMismatchError(NielsenError, AssertionError):
    """Two independent orbit counts disagreed. Indicates a bug, never bad input."""
