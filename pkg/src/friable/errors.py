"""Exception types shared across the package."""


class FriableError(Exception):
    pass


class DomainError(FriableError, ValueError):
    """Argument outside the mathematical domain of a formula."""


class RangeError(FriableError, ValueError):
    """Argument outside a table or window that was built earlier."""


class CapacityError(FriableError, MemoryError):
    """Requested window or lattice exceeds the configured budget."""


class ToleranceError(FriableError, ArithmeticError):
    """A numerical construction did not reach its tolerance."""


class CheckFailure(FriableError, AssertionError):
    """An asserted inequality failed."""
