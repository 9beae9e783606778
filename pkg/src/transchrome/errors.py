"""Exception types shared across the package."""


class TranschromeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TranschromeError):
    """Mathematically invalid input (bad prime, degree mismatch, ...)."""


class DegreeMismatch(DomainError):
    pass


class NotInGroup(DomainError):
    pass


class NotSubgroup(DomainError):
    pass


class ActionNotClosed(DomainError):
    pass


class NotPrime(DomainError):
    pass


class NotCommuting(DomainError):
    pass


class OrderNotPPower(DomainError):
    pass


class BadParameters(DomainError):
    pass


class ResourceLimit(TranschromeError):
    """A computation would exceed the configured desk-scale caps."""


class InternalMismatch(TranschromeError):
    """Two independent computations of the same quantity disagreed.

    This is always a build-failing diagnostic, never silently resolved.
    """


class IntegralityFailure(TranschromeError):
    """A series coefficient that must be p-integral is not."""


class TruncationTooSmall(DomainError):
    pass


class NotWeierstrass(DomainError):
    """The series is not a unit multiple of x^d modulo the maximal ideal."""


class PrecisionExhausted(TranschromeError):
    pass
