"""Exact arithmetic in Q(sqrt(D)).

Elements are ``a + b*sqrt(disc)`` with rational ``a``, ``b`` and an integer
``disc``. The discriminant of a Lucas pair may be rational (``P``, ``Q`` are
allowed to be fractions); ``D = n/d`` is then carried as ``disc = n*d`` with
``sqrt(D) = sqrt(n*d)/d``.

A perfect-square ``disc`` is folded into the rational part on construction,
so equality stays a plain comparison of components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from .errors import (
    DegenerateDiscriminant,
    DiscriminantMismatch,
    DivisionByZero,
    NotRational,
)

Rational = Fraction

__all__ = [
    "Rational",
    "make_rational",
    "QuadraticSurd",
    "LucasParams",
    "root_p",
    "root_q",
    "as_rational",
]


def make_rational(num: int | Fraction | str, den: int | Fraction = 1) -> Fraction:
    """Canonical reduced fraction with a positive denominator.

    >>> make_rational(6, -4)
    Fraction(-3, 2)
    """
    if den == 0:
        raise DivisionByZero(f"zero denominator in {num}/{den}")
    if isinstance(num, str):
        num = Fraction(num)
    return Fraction(num) / Fraction(den)


@lru_cache(maxsize=256)
def _square_root_or_none(n: int) -> int | None:
    if n < 0:
        return None
    s = math.isqrt(n)
    return s if s * s == n else None


class QuadraticSurd:
    """Immutable element ``rat + coef*sqrt(disc)``."""

    __slots__ = ("rat", "coef", "disc")

    def __init__(self, rat=0, coef=0, disc: int = 1):
        rat = Fraction(rat)
        coef = Fraction(coef)
        disc = int(disc)
        if coef:
            s = _square_root_or_none(disc)
            if s is not None:
                rat += coef * s
                coef = Fraction(0)
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "disc", disc)

    @classmethod
    def _raw(cls, rat: Fraction, coef: Fraction, disc: int) -> "QuadraticSurd":
        # Inputs already normalized: a non-square disc stays non-square and a
        # square disc always comes with coef == 0, so no folding is needed.
        x = object.__new__(cls)
        object.__setattr__(x, "rat", rat)
        object.__setattr__(x, "coef", coef)
        object.__setattr__(x, "disc", disc)
        return x

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticSurd is immutable")

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.disc != self.disc:
                raise DiscriminantMismatch(
                    f"cannot combine surds over sqrt({self.disc}) and sqrt({other.disc})"
                )
            return other
        if isinstance(other, (int, _RationalABC)):
            return QuadraticSurd._raw(Fraction(other), Fraction(0), self.disc)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticSurd._raw(self.rat + o.rat, self.coef + o.coef, self.disc)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticSurd._raw(self.rat - o.rat, self.coef - o.coef, self.disc)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadraticSurd._raw(-self.rat, -self.coef, self.disc)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.rat, self.coef, o.rat, o.coef
        if not b and not d:
            return QuadraticSurd._raw(a * c, b, self.disc)
        return QuadraticSurd._raw(a * c + b * d * self.disc, a * d + b * c, self.disc)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """``x * conj(x)``, always rational."""
        return self.rat * self.rat - self.coef * self.coef * self.disc

    def conj(self) -> "QuadraticSurd":
        return QuadraticSurd._raw(self.rat, -self.coef, self.disc)

    def inv(self) -> "QuadraticSurd":
        if not self:
            raise DivisionByZero("inverse of zero in Q(sqrt(D))")
        if not self.coef:
            return QuadraticSurd._raw(1 / self.rat, self.coef, self.disc)
        n = self.norm()
        return QuadraticSurd._raw(self.rat / n, -self.coef / n, self.disc)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = QuadraticSurd._raw(Fraction(1), Fraction(0), self.disc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self) -> bool:
        return bool(self.rat) or bool(self.coef)

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadraticSurd):
            return (self.disc, self.rat, self.coef) == (other.disc, other.rat, other.coef)
        if isinstance(other, (int, _RationalABC)):
            return not self.coef and self.rat == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.coef:
            return hash(self.rat)
        return hash((self.rat, self.coef, self.disc))

    @property
    def is_rational(self) -> bool:
        return not self.coef

    def as_rational(self) -> Fraction:
        if self.coef:
            raise NotRational(f"{self} has a non-zero sqrt({self.disc}) part")
        return self.rat

    def __repr__(self) -> str:
        return f"QuadraticSurd({self.rat!s}, {self.coef!s}, disc={self.disc})"

    def __str__(self) -> str:
        if not self.coef:
            return str(self.rat)
        return f"{self.rat} + ({self.coef})*sqrt({self.disc})"


def as_rational(x: QuadraticSurd) -> Fraction:
    return x.as_rational()


@dataclass(frozen=True)
class LucasParams:
    """Parameters of ``x**2 = P*x - Q``; roots satisfy ``p + q = P``, ``p*q = Q``."""

    P: Fraction
    Q: Fraction
    D: Fraction = field(init=False)
    disc: int = field(init=False, repr=False)
    sqrt_scale: Fraction = field(init=False, repr=False)

    def __post_init__(self):
        P = make_rational(self.P)
        Q = make_rational(self.Q)
        D = P * P - 4 * Q
        if D == 0:
            raise DegenerateDiscriminant(f"P**2 - 4Q = 0 for P={P}, Q={Q}: the roots coincide")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "D", D)
        # sqrt(n/d) = sqrt(n*d) / d
        object.__setattr__(self, "disc", D.numerator * D.denominator)
        object.__setattr__(self, "sqrt_scale", Fraction(1, D.denominator))

    def surd(self, rat=0, coef=0) -> QuadraticSurd:
        """``rat + coef*sqrt(D)`` in this field."""
        return QuadraticSurd(rat, Fraction(coef) * self.sqrt_scale, self.disc)

    def sqrt_d(self) -> QuadraticSurd:
        return self.surd(0, 1)


def root_p(params: LucasParams) -> QuadraticSurd:
    """``(P + sqrt(D)) / 2``."""
    return params.surd(params.P / 2, Fraction(1, 2))


def root_q(params: LucasParams) -> QuadraticSurd:
    """``(P - sqrt(D)) / 2``."""
    return params.surd(params.P / 2, Fraction(-1, 2))
