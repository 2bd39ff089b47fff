"""Generalized binomial and multinomial coefficients of a sequence L.

Two independent routes:

* the factorial formula ``L[n]! / (L[k]! * L[n-k]!)``, evaluated as a
  falling factorial over ``L[k]!``;
* a Pascal-like recurrence on the multinomial lattice,
  ``C(r+s; r,s) = g1*C(r+s-1; r-1,s) + g2*C(r+s-1; r,s-1)``, valid for any
  pair with ``L[r+s] = g1*L[r] + g2*L[s]``.

The recurrence runs in Q(sqrt(D)) because most coefficient pairs are
irrational; entries are collapsed to rationals only on extraction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DegenerateSequence, Inconsistency, IndexOutOfRange, SingularCoefficient
from .quadfield import QuadraticSurd, make_rational
from .sequences import IdentityCheck, SequenceContext

__all__ = [
    "RULES",
    "FACTORIAL",
    "CoefficientPair",
    "Triangle",
    "default_rule",
    "require_nondegenerate",
    "factorial_binomial",
    "multinomial",
    "check_multinomial_product",
    "u_coeffs",
    "u_coeffs_as_printed",
    "v_coeffs",
    "fontene_coeffs",
    "horadam_h_coeffs",
    "coeff_pair",
    "recurrence_binomial",
    "recurrence_lattice",
    "build_triangle",
]

FACTORIAL = "factorial"
RULES = ("u", "u-swapped", "v", "horadam", "fontene-left", "fontene-right")


@dataclass(frozen=True)
class CoefficientPair:
    g1: QuadraticSurd
    g2: QuadraticSurd
    site: tuple[int, int]

    def apply(self, l_r, l_s) -> QuadraticSurd:
        return self.g1 * l_r + self.g2 * l_s


def default_rule(ctx: SequenceContext) -> str:
    return {"u": "u", "v": "v", "w": "horadam", "h": "horadam"}.get(ctx.kind.tag, "fontene-left")


def require_nondegenerate(ctx: SequenceContext, n: int) -> None:
    """Raise DegenerateSequence naming the first zero among ``L[1..n]``."""
    if n <= ctx.nonzero_upto:
        return
    for m in range(ctx.nonzero_upto + 1, n + 1):
        if not ctx.term(m):
            raise DegenerateSequence(m)
        ctx.nonzero_upto = m


def factorial_binomial(ctx: SequenceContext, n: int, k: int) -> Fraction:
    if n < 0 or k < 0 or k > n:
        raise IndexOutOfRange(f"binomial needs 0 <= k <= n, got n={n}, k={k}")
    require_nondegenerate(ctx, n)
    # C(n,k) = C(n,n-k) for any sequence; take the shorter falling factorial
    k = min(k, n - k)
    bottom = ctx.factorial(k)
    num, den = bottom.denominator, bottom.numerator
    for m in range(n - k + 1, n + 1):
        t = ctx.term(m)
        num *= t.numerator
        den *= t.denominator
    return Fraction(num, den)


def multinomial(ctx: SequenceContext, n: int, parts: Sequence[int]) -> Fraction:
    """``L[n]! / prod(L[k_i]!)`` when the parts sum to ``n``, otherwise 0."""
    if n < 0 or any(k < 0 for k in parts):
        raise IndexOutOfRange(f"negative index in multinomial n={n}, parts={list(parts)}")
    require_nondegenerate(ctx, max([n, *parts]))
    if sum(parts) != n:
        return Fraction(0)
    # accumulate integer numerator/denominator, reduce once
    top = ctx.factorial(n)
    num, den = top.numerator, top.denominator
    for k in parts:
        f = ctx.factorial(k)
        num *= f.denominator
        den *= f.numerator
    return Fraction(num, den)


def check_multinomial_product(
    ctx: SequenceContext, n: int, k: int, parts: Sequence[int]
) -> IdentityCheck:
    """``C(n,k) * C(n-k; parts) == C(n; k, parts)``."""
    if k + sum(parts) != n:
        raise ValueError(f"k + sum(parts) must equal n (n={n}, k={k}, parts={list(parts)})")
    return IdentityCheck(
        "eq4",
        (n, k, *parts),
        factorial_binomial(ctx, n, k) * multinomial(ctx, n - k, parts),
        multinomial(ctx, n, [k, *parts]),
    )


# ----------------------------------------------------------------------------
# Coefficient families
# ----------------------------------------------------------------------------


def _check_site(r: int, s: int) -> None:
    if r < 1 or s < 1:
        raise IndexOutOfRange(f"coefficient sites need r, s >= 1, got ({r}, {s})")


def _require_kind(ctx: SequenceContext, *tags: str) -> None:
    if ctx.kind.tag not in tags:
        raise ValueError(f"rule needs a sequence of kind {'/'.join(tags)}, got {ctx.kind.tag!r}")


def _verified(ctx: SequenceContext, pair: CoefficientPair) -> CoefficientPair:
    r, s = pair.site
    if pair.apply(ctx.term(r), ctx.term(s)) != ctx.term(r + s):
        raise Inconsistency(
            f"coefficient pair at {pair.site} breaks L[r+s] = g1*L[r] + g2*L[s]: "
            f"{pair.g1}, {pair.g2}"
        )
    return pair


def u_coeffs(ctx: SequenceContext, r: int, s: int, variant: str = "primary") -> CoefficientPair:
    """Pair for the U sequence: ``(p**s, q**r)`` or, swapped, ``(q**s, p**r)``.

    Both follow from ``U[r+s] = p**s U[r] + q**r U[s]`` and its p<->q image.
    """
    _check_site(r, s)
    _require_kind(ctx, "u")
    if variant == "primary":
        pair = CoefficientPair(ctx.p_pow(s), ctx.q_pow(r), (r, s))
    elif variant == "swapped":
        pair = CoefficientPair(ctx.q_pow(s), ctx.p_pow(r), (r, s))
    else:
        raise ValueError(f"unknown U variant {variant!r}")
    return _verified(ctx, pair)


def u_coeffs_as_printed(ctx: SequenceContext, r: int, s: int, variant: str = "primary") -> CoefficientPair:
    """Exponents attached to the opposite lattice direction: ``(p**r, q**s)``.

    Not a valid pair in general; returned unchecked for diagnostics.
    """
    _check_site(r, s)
    if variant == "primary":
        return CoefficientPair(ctx.p_pow(r), ctx.q_pow(s), (r, s))
    return CoefficientPair(ctx.q_pow(r), ctx.p_pow(s), (r, s))


def _cramer_pair(ctx: SequenceContext, r: int, s: int) -> CoefficientPair:
    # Solves g1*x**r + g2*x**s = x**(r+s) for x = p and x = q simultaneously,
    # which makes the pair independent of the sequence weights.
    pr, ps, qr, qs = ctx.p_pow(r), ctx.p_pow(s), ctx.q_pow(r), ctx.q_pow(s)
    det = pr * qs - qr * ps
    if not det:
        raise SingularCoefficient(
            (r, s), f"p^r q^s - q^r p^s vanishes at site (r, s) = ({r}, {s})"
        )
    prs, qrs = ctx.p_pow(r + s), ctx.q_pow(r + s)
    h1 = (prs * qs - qrs * ps) / det
    h2 = (prs * qr - qrs * pr) / -det
    return CoefficientPair(h1, h2, (r, s))


def v_coeffs(ctx: SequenceContext, r: int, s: int) -> CoefficientPair:
    """Pair for the V sequence; at ``r == s`` each part is a genuine surd."""
    _check_site(r, s)
    _require_kind(ctx, "v")
    if r != s:
        return _verified(ctx, _cramer_pair(ctx, r, s))
    if not ctx.params.P:
        raise SingularCoefficient((r, s), f"diagonal site ({r}, {r}) needs P != 0")
    pr, qr = ctx.p_pow(r), ctx.q_pow(r)
    denom = pr + qr
    if not denom:
        raise SingularCoefficient((r, s), f"p^r + q^r vanishes at r = {r}")
    inv = denom.inv()
    return _verified(ctx, CoefficientPair(ctx.p_pow(2 * r) * inv, ctx.q_pow(2 * r) * inv, (r, s)))


def horadam_h_coeffs(ctx: SequenceContext, r: int, s: int) -> CoefficientPair:
    """Pair for ``H[n] = A p**n + B q**n`` (W is handled as an H with rescaled weights)."""
    _check_site(r, s)
    _require_kind(ctx, "h", "w")
    if r != s:
        return _verified(ctx, _cramer_pair(ctx, r, s))
    a, b = ctx.alpha_beta()
    ap, bq = a * ctx.p_pow(r), b * ctx.q_pow(r)
    denom = ap + bq
    if not denom:
        raise SingularCoefficient((r, s), f"A p^r + B q^r vanishes at r = {r}")
    inv = denom.inv()
    return _verified(
        ctx, CoefficientPair(a * ctx.p_pow(2 * r) * inv, b * ctx.q_pow(2 * r) * inv, (r, s))
    )


def fontene_coeffs(ctx: SequenceContext, r: int, s: int, variant: str = "left") -> CoefficientPair:
    """Rational pair for an arbitrary sequence A.

    left: ``(1, (A[r+s] - A[r]) / A[s])``; right: ``((A[r+s] - A[s]) / A[r], 1)``.
    """
    _check_site(r, s)
    a_r, a_s, a_rs = ctx.term(r), ctx.term(s), ctx.term(r + s)
    one = ctx.embed(1)
    if variant == "left":
        if not a_s:
            raise SingularCoefficient((r, s), f"A[{s}] = 0")
        pair = CoefficientPair(one, ctx.embed((a_rs - a_r) / a_s), (r, s))
    elif variant == "right":
        if not a_r:
            raise SingularCoefficient((r, s), f"A[{r}] = 0")
        pair = CoefficientPair(ctx.embed((a_rs - a_s) / a_r), one, (r, s))
    else:
        raise ValueError(f"unknown Fontene variant {variant!r}")
    return _verified(ctx, pair)


def coeff_pair(ctx: SequenceContext, rule: str, r: int, s: int) -> CoefficientPair:
    if rule == "u":
        return u_coeffs(ctx, r, s, "primary")
    if rule == "u-swapped":
        return u_coeffs(ctx, r, s, "swapped")
    if rule == "v":
        return v_coeffs(ctx, r, s)
    if rule == "horadam":
        return horadam_h_coeffs(ctx, r, s)
    if rule == "fontene-left":
        return fontene_coeffs(ctx, r, s, "left")
    if rule == "fontene-right":
        return fontene_coeffs(ctx, r, s, "right")
    raise ValueError(f"unknown coefficient rule {rule!r}; choose from {', '.join(RULES)}")


# ----------------------------------------------------------------------------
# Recurrence engine
# ----------------------------------------------------------------------------


def recurrence_lattice(ctx: SequenceContext, rule: str, n_max: int) -> list[list[QuadraticSurd]]:
    """``T[r][s] = C(r+s; r, s)`` for all ``r + s <= n_max``, as field elements."""
    one = ctx.embed(1)
    T = [[one] * (n_max - r + 1) for r in range(n_max + 1)]
    for r in range(1, n_max + 1):
        row, prev = T[r], T[r - 1]
        for s in range(1, n_max - r + 1):
            pair = coeff_pair(ctx, rule, r, s)
            row[s] = pair.g1 * prev[s] + pair.g2 * row[s - 1]
    return T


def recurrence_binomial(ctx: SequenceContext, rule: str, n: int, k: int) -> Fraction:
    if n < 0 or k < 0 or k > n:
        raise IndexOutOfRange(f"binomial needs 0 <= k <= n, got n={n}, k={k}")
    require_nondegenerate(ctx, n)
    r, s = k, n - k
    if r == 0 or s == 0:
        return Fraction(1)
    one = ctx.embed(1)
    prev = [one] * (s + 1)
    for i in range(1, r + 1):
        row = [one] * (s + 1)
        for j in range(1, s + 1):
            pair = coeff_pair(ctx, rule, i, j)
            row[j] = pair.g1 * prev[j] + pair.g2 * row[j - 1]
        prev = row
    return _collapse(prev[s], (r, s))


def _collapse(x: QuadraticSurd, site) -> Fraction:
    if not x.is_rational:
        raise Inconsistency(f"lattice entry at {site} is irrational: {x}")
    return x.rat


@dataclass
class Triangle:
    """Rows ``0..n_max`` of C(n, k), plus enough metadata to re-emit them."""

    family: str
    params: dict | None
    rule: str
    rows: list[list[Fraction]] = field(default_factory=list)
    init: list[str] | None = None

    @property
    def route(self) -> str:
        return FACTORIAL if self.rule == FACTORIAL else "recurrence"

    def to_dict(self) -> dict:
        d = {"family": self.family, "params": self.params, "rule": self.rule}
        if self.init is not None:
            d["init"] = self.init
        d["rows"] = [[str(x) for x in row] for row in self.rows]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Triangle":
        d = json.loads(text)
        return cls(
            family=d["family"],
            params=d["params"],
            rule=d["rule"],
            rows=[[make_rational(x) for x in row] for row in d["rows"]],
            init=d.get("init"),
        )

    def to_csv(self) -> str:
        return "".join(",".join(str(x) for x in row) + "\n" for row in self.rows)

    def same_values(self, other: "Triangle") -> bool:
        return self.rows == other.rows


def build_triangle(ctx: SequenceContext, rule: str, n_max: int) -> Triangle:
    """Rows ``0..n_max`` by the factorial formula (``rule='factorial'``) or a recurrence rule."""
    if n_max < 0:
        raise IndexOutOfRange(f"n_max must be >= 0, got {n_max}")
    require_nondegenerate(ctx, n_max)
    params = None
    if ctx.params is not None:
        params = {"P": str(ctx.params.P), "Q": str(ctx.params.Q)}
    tri = Triangle(
        family=ctx.kind.tag,
        params=params,
        rule=rule,
        init=[str(x) for x in ctx.kind.init] if ctx.kind.init is not None else None,
    )
    if rule == FACTORIAL:
        tri.rows = [[factorial_binomial(ctx, n, k) for k in range(n + 1)] for n in range(n_max + 1)]
    else:
        T = recurrence_lattice(ctx, rule, n_max)
        tri.rows = [
            [_collapse(T[k][n - k], (k, n - k)) for k in range(n + 1)] for n in range(n_max + 1)
        ]
    return tri


@lru_cache(maxsize=None)
def compositions(total: int) -> tuple[tuple[int, ...], ...]:
    """Ordered tuples of positive integers summing to ``total`` (``()`` for 0)."""
    if total == 0:
        return ((),)
    return tuple(
        (first, *rest) for first in range(1, total + 1) for rest in compositions(total - first)
    )
