"""
Errors raised by circinv.

Every error is a `CircinvError`, so callers (and the CLI) can catch the whole family at once.
"""
from typing import Optional


class CircinvError(Exception):
    """Base class of every error raised by the library."""


class InvalidOrder(CircinvError, ValueError):
    pass


class OrderMismatch(CircinvError, ValueError):
    pass


class CycDivisionByZero(CircinvError, ZeroDivisionError):
    pass


class BasisMismatch(CircinvError, ValueError):
    pass


class PolySyntaxError(CircinvError, SyntaxError):
    """
    Raised by the expression parser, `position` is the 0-based offset of the offending character.
    """

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class IndexOutOfRange(CircinvError, IndexError):
    pass


class NotADivisor(CircinvError, ValueError):
    pass


class NotCoprime(CircinvError, ValueError):
    pass


class LengthMismatch(CircinvError, ValueError):
    pass


class TooManyPrimeFactors(CircinvError, ValueError):
    pass


class TooFewPrimeFactors(CircinvError, ValueError):
    pass


class NotInLattice(CircinvError, ValueError):
    pass


class NegativeEntry(CircinvError, ValueError):
    pass


class NotInvariant(CircinvError, ValueError):
    pass


class ExpansionTooLarge(CircinvError):
    pass


class InvariantViolation(CircinvError, AssertionError):
    """
    A property proven to hold failed at runtime. This always means a bug in circinv.
    """
