"""Exception types shared across the package."""


class LargenessError(Exception):
    """Base class for every error raised by this package."""


class RingMismatchError(LargenessError, ValueError):
    """Operands live in different polynomial rings."""


class ModulusError(LargenessError, ArithmeticError):
    """A required modular inverse does not exist."""


class ResourceLimitError(LargenessError, RuntimeError):
    """A configured bound (pairs, basis size, subsets, minors, slice size) was hit."""


class PrimeDisagreementError(LargenessError, RuntimeError):
    """Two primes produced different answers for the same exact computation."""


class SpecError(LargenessError, ValueError):
    """A representation description failed validation.

    ``path`` is the location of the offending field inside the JSON document.
    """

    def __init__(self, message, path=()):
        self.path = tuple(path)
        loc = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{loc}: {message}")
