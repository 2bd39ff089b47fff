"""Lucas U/V, Horadam W/H and user-supplied sequences, computed exactly.

Every kind except ``custom`` obeys ``L[n+1] = P*L[n] - Q*L[n-1]`` and also
has a closed form ``alpha*p**n + beta*q**n`` in Q(sqrt(D)). Terms come from
the recurrence (memoized); the closed form is kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import IndexOutOfRange
from .quadfield import LucasParams, QuadraticSurd, make_rational, root_p, root_q

__all__ = [
    "SequenceKind",
    "SequenceContext",
    "U",
    "V",
    "horadam_w",
    "horadam_h",
    "custom",
    "term",
    "term_closed_form",
    "derive_closed_form_weights",
    "IdentityCheck",
    "AdditionDiagnosis",
    "lucas_pair",
    "check_addition_u",
    "check_addition_v",
    "check_shift_identities",
]


@dataclass(frozen=True)
class SequenceKind:
    """Which sequence a context generates.

    ``tag`` is one of ``"u"``, ``"v"``, ``"w"``, ``"h"``, ``"custom"``.
    For ``w``/``h`` the pair ``init`` holds the two starting terms; for
    ``custom`` ``values`` holds the whole (finite) sequence from index 0.
    """

    tag: str
    init: tuple[Fraction, Fraction] | None = None
    values: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.tag not in ("u", "v", "w", "h", "custom"):
            raise ValueError(f"unknown sequence kind {self.tag!r}")
        if self.tag in ("w", "h"):
            if self.init is None or len(self.init) != 2:
                raise ValueError(f"kind {self.tag!r} needs two initial values")
            object.__setattr__(self, "init", tuple(make_rational(x) for x in self.init))
        if self.tag == "custom":
            if not self.values:
                raise ValueError("custom sequence needs at least one value")
            object.__setattr__(self, "values", tuple(make_rational(x) for x in self.values))


U = SequenceKind("u")
V = SequenceKind("v")


def horadam_w(w0, w1) -> SequenceKind:
    return SequenceKind("w", (w0, w1))


def horadam_h(h0, h1) -> SequenceKind:
    return SequenceKind("h", (h0, h1))


def custom(values: Sequence) -> SequenceKind:
    return SequenceKind("custom", values=tuple(values))


class SequenceContext:
    """Parameters plus memo tables for one sequence.

    Not thread-safe: the memo grows on demand. Call :meth:`warm` before
    sharing a context between threads for read-only use.
    """

    def __init__(self, params: LucasParams | None, kind: SequenceKind):
        if params is None and kind.tag != "custom":
            raise ValueError(f"kind {kind.tag!r} needs LucasParams")
        self.params = params
        self.kind = kind
        if kind.tag == "custom":
            self._memo = list(kind.values)
        elif kind.tag == "u":
            self._memo = [Fraction(0), Fraction(1)]
        elif kind.tag == "v":
            self._memo = [Fraction(2), params.P]
        else:
            self._memo = list(kind.init)
        self._factorials = [Fraction(1)]
        # highest m such that L[1..m] are known to be non-zero
        self.nonzero_upto = 0
        self._p_pows: list[QuadraticSurd] = []
        self._q_pows: list[QuadraticSurd] = []
        self._weights: tuple[QuadraticSurd, QuadraticSurd] | None = None
        self._alpha_beta: tuple[QuadraticSurd, QuadraticSurd] | None = None

    def __repr__(self):
        return f"SequenceContext({self.params!r}, {self.kind!r})"

    @property
    def disc(self) -> int:
        # custom sequences live in Q itself; sqrt(1) folds away
        return self.params.disc if self.params is not None else 1

    def embed(self, x) -> QuadraticSurd:
        return QuadraticSurd._raw(Fraction(x), Fraction(0), self.disc)

    def term(self, n: int) -> Fraction:
        if n < 0:
            raise IndexOutOfRange(f"negative index {n}")
        memo = self._memo
        if n < len(memo):
            return memo[n]
        if self.kind.tag == "custom":
            raise IndexOutOfRange(
                f"index {n} beyond the {len(memo)} supplied terms of a custom sequence"
            )
        P, Q = self.params.P, self.params.Q
        while len(memo) <= n:
            memo.append(P * memo[-1] - Q * memo[-2])
        return memo[n]

    def __len__(self):
        # only meaningful for custom kinds
        return len(self._memo)

    def warm(self, n: int) -> None:
        """Precompute terms and factorials up to ``n`` where defined."""
        self.term(n)

    def factorial(self, n: int) -> Fraction:
        """``L[n] * L[n-1] * ... * L[1]``, with ``L[0]! = 1``."""
        f = self._factorials
        while len(f) <= n:
            f.append(f[-1] * self.term(len(f)))
        return f[n]

    def p_pow(self, n: int) -> QuadraticSurd:
        return _cached_pow(self._p_pows, root_p(self.params), n)

    def q_pow(self, n: int) -> QuadraticSurd:
        return _cached_pow(self._q_pows, root_q(self.params), n)

    def alpha_beta(self) -> tuple[QuadraticSurd, QuadraticSurd]:
        """Weights with ``L[n] = alpha*p**n + beta*q**n`` for every non-custom kind."""
        if self._alpha_beta is None:
            tag = self.kind.tag
            if tag == "custom":
                raise ValueError("custom sequences have no closed form")
            p, q = root_p(self.params), root_q(self.params)
            one = self.embed(1)
            if tag == "v":
                ab = (one, one)
            elif tag == "h":
                ab = derive_closed_form_weights(self)
            else:
                A, B = (one, one) if tag == "u" else derive_closed_form_weights(self)
                d = (p - q).inv()
                ab = (A * d, -B * d)
            self._alpha_beta = ab
        return self._alpha_beta


def _cached_pow(cache: list, base: QuadraticSurd, n: int) -> QuadraticSurd:
    if not cache:
        cache.append(base**0)
    while len(cache) <= n:
        cache.append(cache[-1] * base)
    return cache[n]


def term(ctx: SequenceContext, n: int) -> Fraction:
    return ctx.term(n)


def derive_closed_form_weights(ctx: SequenceContext) -> tuple[QuadraticSurd, QuadraticSurd]:
    """Field weights ``(A, B)`` of a Horadam context.

    For ``h``: ``H[n] = A*p**n + B*q**n``. For ``w``:
    ``W[n] = (A*p**n - B*q**n) / (p - q)``.
    """
    if ctx.kind.tag not in ("w", "h"):
        raise ValueError(f"closed-form weights are defined for Horadam kinds, not {ctx.kind.tag!r}")
    if ctx._weights is None:
        p, q = root_p(ctx.params), root_q(ctx.params)
        x0, x1 = ctx.kind.init
        if ctx.kind.tag == "h":
            d = (p - q).inv()
            A = (x1 - q * x0) * d
            B = (p * x0 - x1) * d
        else:
            A = x1 - q * x0
            B = x1 - p * x0
        ctx._weights = (A, B)
    return ctx._weights


def term_closed_form(ctx: SequenceContext, n: int) -> Fraction:
    """The n-th term evaluated from powers of the roots, collapsed to Q."""
    if n < 0:
        raise IndexOutOfRange(f"negative index {n}")
    alpha, beta = ctx.alpha_beta()
    return (alpha * ctx.p_pow(n) + beta * ctx.q_pow(n)).as_rational()


# ----------------------------------------------------------------------------
# Addition identities
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of comparing two exactly evaluated sides of an identity."""

    identity: str
    site: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class AdditionDiagnosis:
    """Printed vs corrected form of a suspect identity at one site."""

    printed: IdentityCheck
    corrected: IdentityCheck
    note: str = ""

    @property
    def matches(self) -> str:
        if self.printed.holds and self.corrected.holds:
            return "both"
        if self.corrected.holds:
            return "corrected"
        if self.printed.holds:
            return "printed"
        return "neither"


def lucas_pair(params: LucasParams) -> tuple[SequenceContext, SequenceContext]:
    return SequenceContext(params, U), SequenceContext(params, V)


def _unpack_pair(pair) -> tuple[SequenceContext, SequenceContext]:
    u, v = pair
    if u.kind.tag != "u" or v.kind.tag != "v" or u.params != v.params:
        raise ValueError("expected a (U, V) context pair over the same parameters")
    return u, v


def check_addition_u(pair, r: int, s: int) -> IdentityCheck:
    """``2*U[r+s] == U[r]*V[s] + U[s]*V[r]``."""
    u, v = _unpack_pair(pair)
    return IdentityCheck(
        "eq7-u",
        (r, s),
        2 * u.term(r + s),
        u.term(r) * v.term(s) + u.term(s) * v.term(r),
    )


def check_addition_v(pair, r: int, s: int) -> AdditionDiagnosis:
    """``2*V[r+s]`` against ``V[r]V[s] + U[r]U[s]`` and ``V[r]V[s] + D*U[r]U[s]``.

    Only the D-weighted form is an identity; the unweighted form agrees
    exactly when ``(D - 1)*U[r]*U[s] == 0``.
    """
    u, v = _unpack_pair(pair)
    lhs = 2 * v.term(r + s)
    vv = v.term(r) * v.term(s)
    uu = u.term(r) * u.term(s)
    printed = IdentityCheck("eq7-printed", (r, s), lhs, vv + uu)
    corrected = IdentityCheck("eq7-corrected", (r, s), lhs, vv + u.params.D * uu)
    return AdditionDiagnosis(printed, corrected)


SHIFT_NOTE = "printed exponent n has no binding; evaluated as (p*q)**s = Q**s"


def check_shift_identities(pair, r: int, s: int) -> tuple[IdentityCheck, IdentityCheck]:
    """``U[r+s] = U[r]V[s] - Q**s U[r-s]`` and ``V[r+s] = V[r]V[s] - Q**s V[r-s]``."""
    if s < 0 or r < s:
        raise IndexOutOfRange(f"shift identities need r >= s >= 0, got r={r}, s={s}")
    u, v = _unpack_pair(pair)
    qs = u.params.Q**s
    return (
        IdentityCheck("eq8-u", (r, s), u.term(r + s), u.term(r) * v.term(s) - qs * u.term(r - s)),
        IdentityCheck("eq8-v", (r, s), v.term(r + s), v.term(r) * v.term(s) - qs * v.term(r - s)),
    )
