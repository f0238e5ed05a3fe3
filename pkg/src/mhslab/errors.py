"""Exception hierarchy shared by every mhslab module."""


class LabError(Exception):
    """Base class for all mhslab errors."""


class NotPrime(LabError, ValueError):
    pass


class BadExponent(LabError, ValueError):
    pass


class LimitExceeded(LabError):
    """A desk-scale resource guard fired (modulus cap, degree cap, enumeration size)."""


class ContextMismatch(LabError, ValueError):
    pass


class NotAUnit(LabError, ZeroDivisionError):
    pass


class DenominatorNotUnit(LabError, ZeroDivisionError):
    pass


class ModuliNotCoprime(LabError, ValueError):
    pass


class NotFound(LabError):
    """Rational reconstruction found no fraction inside the bound."""


class PreconditionViolated(LabError, ValueError):
    pass


class UnknownTheorem(LabError, KeyError):
    pass


class PrimeInadmissible(LabError, ValueError):
    pass


class PrefactorMismatch(LabError):
    """A residue is not divisible by the p-power the hypothesis claims."""


class DependentRows(LabError, ValueError):
    pass


class NoRelationFound(LabError):
    pass


class InconsistentHoldout(LabError):
    pass


class CorruptCache(LabError, UserWarning):
    """Raised as a warning: a bad cache record is a miss, not a failure."""
