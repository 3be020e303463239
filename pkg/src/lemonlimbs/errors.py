"""Exception types shared across the package.

Every domain failure derives from ``DomainError`` so the command line can map
them all to exit status 1.
"""


class DomainError(Exception):
    pass


class ZeroDenominator(DomainError, ZeroDivisionError):
    pass


class PreperiodicAngle(DomainError):
    pass


class ZeroAngle(DomainError):
    pass


class DegreeTooHigh(DomainError):
    pass


class InstanceTooLarge(DomainError):
    pass


class OverlappingOrbits(DomainError):
    pass


class NotM2Combinatorics(DomainError):
    pass


class NotPrimitive(DomainError):
    pass


class AmbiguousThirdCycle(DomainError):
    pass


class NoConvergence(DomainError):
    pass


class NonRepelling(DomainError):
    pass


class NotInBasin(DomainError):
    pass


class ContinuationFailure(DomainError):
    pass


class WrongLimb(DomainError):
    pass


class RayFailure(DomainError):
    pass


class NotInLimb(DomainError):
    pass
