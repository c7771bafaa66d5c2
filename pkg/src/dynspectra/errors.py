"""Exception types shared across the package."""


class SpectraError(Exception):
    """Base class for all package errors."""


class SymbolNotInAlphabet(SpectraError, KeyError):
    pass


class CenterSymbolMismatch(SpectraError, ValueError):
    pass


class EmptySubshift(SpectraError, ValueError):
    """Raised when no bi-infinite sequence survives a construction."""


class EmptyGraph(EmptySubshift):
    pass


class NotTransitive(SpectraError, ValueError):
    pass


class NoSecondCycle(SpectraError, ValueError):
    pass


class ZeroGap(SpectraError, ValueError):
    """Two cylinder values could not be separated at the requested depth."""


class NotHappy(SpectraError, ValueError):
    pass


class InadmissibleWord(SpectraError, ValueError):
    pass


class DimensionTooLarge(SpectraError, ValueError):
    pass


class BudgetExceeded(SpectraError, RuntimeError):
    pass


class Ambiguous(SpectraError, RuntimeError):
    """Interval enclosures overlap and the decision cannot be certified."""
