"""Exception types shared across the package."""


class MsumError(Exception):
    """Base class for all package errors."""


class NotCoprime(MsumError, ValueError):
    """gcd(q, e) != 1 where a coprime pair is required."""


class DomainError(MsumError, ValueError):
    """An argument is outside the domain of the operation."""


class DegenerateInput(MsumError, ValueError):
    """Polynomial input degenerate (e.g. divisible by the cyclotomic factor)."""


class NotFoundWithinCap(MsumError, RuntimeError):
    """A bounded search hit its cap before the guaranteed hit was found."""


class ModulusTooLarge(MsumError, ValueError):
    """Modulus exceeds what the exact engines can handle."""


class UnknownClaim(MsumError, KeyError):
    """Claim id not recognized by the verification campaign."""


class ClassificationOverlap(MsumError, RuntimeError):
    """More than one classifier case matched; the case analysis must be a partition."""


class StoreError(MsumError, RuntimeError):
    """Result store file is malformed or inconsistent."""
