"""Exception hierarchy shared by all modules."""


class MasseyError(Exception):
    """Base class for library errors."""


class WordSyntaxError(MasseyError, SyntaxError):
    pass


class GeneratorIndexError(MasseyError, IndexError):
    pass


class DimensionMismatch(MasseyError, ValueError):
    pass


class NotInS2(MasseyError, ValueError):
    """The element has a nonzero degree-1 Magnus coefficient."""


class InternalBasisError(MasseyError, RuntimeError):
    """Degree-3 solve was inconsistent. Never caused by valid input."""


class FoldTooLarge(MasseyError):
    """Defining-system enumeration would exceed the configured budget."""


class BudgetExceeded(MasseyError):
    pass


class NotANorm(MasseyError, ValueError):
    pass


class HeightCapExceeded(MasseyError, RuntimeError):
    pass


class NotDefined(MasseyError):
    """A cup product obstructs the requested Massey product."""
