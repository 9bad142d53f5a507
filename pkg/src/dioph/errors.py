"""Exception hierarchy shared by all dioph modules."""


class DiophError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DiophError, ValueError):
    """An input lies outside the admissible range of an operation."""


class PrecisionError(DiophError):
    """Enclosures could not be refined enough to decide a comparison."""


class RootIsolationError(DiophError):
    """A bracket does not exhibit a certified sign change."""


class BudgetError(DiophError):
    """An exhaustive search would exceed the enumeration budget."""


class RationalInputError(DiophError):
    """A rational (or low-degree algebraic) number was used where exponents
    are only meaningful for irrational input."""


class InconsistentDataError(DiophError):
    """Supplied limit data cannot come from any real number."""
