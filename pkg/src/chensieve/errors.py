class ChenSieveError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ChenSieveError, ValueError):
    """Argument outside the domain of the operation."""


class CapacityError(ChenSieveError):
    """A table is too small, or a request exceeds the configured budget."""


class AccuracyError(ChenSieveError, ArithmeticError):
    """Numerical routine failed to reach the requested tolerance."""


class InvariantError(ChenSieveError, AssertionError):
    """A checked mathematical invariant did not hold."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"{name}: {detail}" if detail else name)
