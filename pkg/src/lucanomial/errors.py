"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LucanomialError(Exception):
    """Base class for all library errors."""


class DivisionByZero(LucanomialError, ZeroDivisionError):
    pass


class DegenerateDiscriminant(LucanomialError, ValueError):
    """P**2 - 4*Q vanishes, so the two roots coincide."""


class DiscriminantMismatch(LucanomialError, ValueError):
    pass


class NotRational(LucanomialError, ValueError):
    """A surd expected to be rational still carries a sqrt(D) part."""


class IndexOutOfRange(LucanomialError, IndexError):
    pass


class DegenerateSequence(LucanomialError, ValueError):
    """Some term L_m with 1 <= m <= n is zero, so L-factorials are not invertible."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"sequence term at index {index} is zero")


class SingularCoefficient(LucanomialError, ValueError):
    """A recurrence coefficient has a vanishing denominator at site (r, s)."""

    def __init__(self, site: tuple[int, int], message: str | None = None):
        self.site = site
        super().__init__(message or f"singular recurrence coefficient at site (r, s) = {site}")


class Inconsistency(LucanomialError, AssertionError):
    """Two routes that must agree did not; always a bug, never bad input."""
