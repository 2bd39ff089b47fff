import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucanomial.binomials import (
    RULES,
    Triangle,
    build_triangle,
    check_multinomial_product,
    coeff_pair,
    compositions,
    factorial_binomial,
    fontene_coeffs,
    horadam_h_coeffs,
    multinomial,
    recurrence_binomial,
    u_coeffs,
    u_coeffs_as_printed,
    v_coeffs,
)
from lucanomial.errors import DegenerateSequence, IndexOutOfRange, SingularCoefficient
from lucanomial.quadfield import LucasParams, root_p, root_q
from lucanomial.sequences import U, V, SequenceContext, custom, horadam_h, horadam_w

FIB = LucasParams(1, -1)


def fib_ints(n):
    a, b, out = 0, 1, []
    for _ in range(n + 1):
        out.append(a)
        a, b = b, a + b
    return out


def fibonomial_oracle(n, k):
    F = fib_ints(n)
    num = math.prod(F[n - k + 1 : n + 1])
    den = math.prod(F[1 : k + 1])
    return Fraction(num, den)


def gaussian_oracle(n, k, q):
    num = math.prod(q ** (n - i) - 1 for i in range(k))
    den = math.prod(q ** (i + 1) - 1 for i in range(k))
    return Fraction(num, den)


@pytest.fixture
def fib():
    return SequenceContext(FIB, U)


@pytest.fixture
def lucas():
    return SequenceContext(FIB, V)


class TestFactorial:
    def test_fibonomial(self, fib):
        assert factorial_binomial(fib, 5, 2) == 15
        for n in range(25):
            for k in range(n + 1):
                assert factorial_binomial(fib, n, k) == fibonomial_oracle(n, k)

    @pytest.mark.parametrize("q", [2, 3, -2, 5])
    def test_gaussian(self, q):
        ctx = SequenceContext(LucasParams(q + 1, q), U)
        assert factorial_binomial(SequenceContext(LucasParams(3, 2), U), 4, 2) == 35
        for n in range(15):
            for k in range(n + 1):
                assert factorial_binomial(ctx, n, k) == gaussian_oracle(n, k, q)

    def test_lucas_v_not_integral(self, lucas):
        assert factorial_binomial(lucas, 4, 2) == Fraction(28, 3)

    def test_k_zero(self, lucas):
        assert all(factorial_binomial(lucas, n, 0) == 1 for n in range(10))

    def test_ordinary(self):
        ctx = SequenceContext(None, custom(range(30)))
        for n in range(30):
            for k in range(n + 1):
                assert factorial_binomial(ctx, n, k) == math.comb(n, k)

    def test_errors(self, fib):
        with pytest.raises(IndexOutOfRange):
            factorial_binomial(fib, 3, 4)
        with pytest.raises(DegenerateSequence) as exc:
            factorial_binomial(SequenceContext(LucasParams(1, 1), U), 5, 2)
        assert exc.value.index == 3


class TestMultinomial:
    def test_examples(self, fib):
        assert multinomial(fib, 4, [2, 2]) == 6
        assert multinomial(fib, 4, [2, 1]) == 0
        assert multinomial(fib, 7, [7]) == 1

    def test_product_identity(self, fib):
        check = check_multinomial_product(fib, 6, 3, [2, 1])
        assert check.holds
        assert check.lhs == fibonomial_oracle(6, 3) * fibonomial_oracle(3, 2)
        assert check_multinomial_product(fib, 5, 5, []).lhs == 1

    def test_bad_decomposition(self, fib):
        with pytest.raises(ValueError):
            check_multinomial_product(fib, 6, 3, [1, 1])

    def test_compositions(self):
        assert compositions(0) == ((),)
        assert sorted(compositions(3)) == sorted([(3,), (1, 2), (2, 1), (1, 1, 1)])
        assert all(len(compositions(n)) == 2 ** (n - 1) for n in range(1, 10))


class TestUCoefficients:
    def test_unit_site(self, fib):
        pair = u_coeffs(fib, 1, 1)
        assert pair.g1 + pair.g2 == 1

    @pytest.mark.parametrize("variant", ["primary", "swapped"])
    @pytest.mark.parametrize("P, Q", [(1, -1), (3, 2), (2, -1), (-3, 2), (1, 0)])
    def test_contract(self, P, Q, variant):
        ctx = SequenceContext(LucasParams(P, Q), U)
        for r in range(1, 16):
            for s in range(1, 16):
                pair = u_coeffs(ctx, r, s, variant)
                assert pair.apply(ctx.term(r), ctx.term(s)) == ctx.term(r + s)

    def test_printed_exponents_break_contract(self, fib):
        # g1 = p^r, g2 = q^s at (3, 1): 2 p^3 + q = 3 + 3 p, not U_4 = 3
        pair = u_coeffs_as_printed(fib, 3, 1)
        value = pair.apply(fib.term(3), fib.term(1))
        assert not value.is_rational
        assert value == 3 + 3 * root_p(FIB)

    def test_needs_u(self, lucas):
        with pytest.raises(ValueError):
            u_coeffs(lucas, 1, 2)


class TestVCoefficients:
    def test_off_diagonal(self, lucas):
        pair = v_coeffs(lucas, 2, 1)
        assert pair.apply(lucas.term(2), lucas.term(1)) == 4

    def test_diagonal(self, lucas):
        pair = v_coeffs(lucas, 1, 1)
        assert (pair.g1 + pair.g2).as_rational() == 3
        # each half is a genuine surd
        assert not pair.g1.is_rational and not pair.g2.is_rational

    @pytest.mark.parametrize("P, Q", [(1, -1), (2, -1), (3, 1), (-1, 3), (2, 3)])
    def test_closed_form_simplification(self, P, Q):
        params = LucasParams(P, Q)
        v, u = SequenceContext(params, V), SequenceContext(params, U)
        for r in range(2, 12):
            for s in range(1, r):
                if not u.term(r - s):
                    continue
                pair = v_coeffs(v, r, s)
                assert pair.g1 == u.term(r) / u.term(r - s)
                assert pair.g2 == -(params.Q ** (r - s)) * u.term(s) / u.term(r - s)

    def test_diagonal_sum(self):
        for P, Q in [(1, -1), (3, 2), (-2, 5)]:
            v = SequenceContext(LucasParams(P, Q), V)
            for r in range(1, 10):
                pair = v_coeffs(v, r, r)
                assert (pair.g1 + pair.g2).as_rational() == v.term(2 * r) / v.term(r)

    def test_singular(self):
        with pytest.raises(SingularCoefficient) as exc:
            v_coeffs(SequenceContext(LucasParams(0, 1), V), 2, 2)
        assert exc.value.site == (2, 2)
        with pytest.raises(SingularCoefficient):
            v_coeffs(SequenceContext(LucasParams(2, 0), V), 1, 2)
        # U_{r-s} = 0 when p/q is a cube root of unity
        with pytest.raises(SingularCoefficient):
            v_coeffs(SequenceContext(LucasParams(1, 1), V), 4, 1)


class TestFontene:
    def test_pascal(self):
        ctx = SequenceContext(None, custom(range(12)))
        pair = fontene_coeffs(ctx, 2, 3, "left")
        assert (pair.g1, pair.g2) == (1, 1)

    def test_tautology(self):
        ctx = SequenceContext(None, custom([0, 3, -1, 7, 2, 9, Fraction(1, 3), 4, 4, 5, 1]))
        for r in range(1, 6):
            for s in range(1, 6):
                pair = fontene_coeffs(ctx, r, s, "right")
                assert pair.g1 * ctx.term(r) + ctx.term(s) == ctx.term(r + s)

    def test_fibonomial_left(self, fib):
        for n in range(16):
            for k in range(n + 1):
                assert recurrence_binomial(fib, "fontene-left", n, k) == fibonomial_oracle(n, k)

    def test_zero_term(self):
        ctx = SequenceContext(None, custom([0, 1, 0, 2, 3]))
        with pytest.raises(SingularCoefficient):
            fontene_coeffs(ctx, 1, 2, "left")
        with pytest.raises(SingularCoefficient):
            fontene_coeffs(ctx, 2, 1, "right")


class TestHoradamCoefficients:
    def test_reduces_to_v(self):
        for P, Q in [(1, -1), (3, 2)]:
            params = LucasParams(P, Q)
            h = SequenceContext(params, horadam_h(2, P))
            v = SequenceContext(params, V)
            for r in range(1, 8):
                for s in range(1, 8):
                    a, b = horadam_h_coeffs(h, r, s), v_coeffs(v, r, s)
                    assert (a.g1, a.g2) == (b.g1, b.g2)

    def test_diagonal_example(self):
        h = SequenceContext(FIB, horadam_h(3, 1))
        pair = horadam_h_coeffs(h, 2, 2)
        assert (pair.g1 + pair.g2) * h.term(2) == h.term(4)

    @pytest.mark.parametrize("kind", [horadam_h(3, 1), horadam_h(-1, 4), horadam_w(1, 3)])
    def test_sweep(self, kind):
        ctx = SequenceContext(LucasParams(1, -2), kind)
        for r in range(1, 11):
            for s in range(1, 11):
                pair = horadam_h_coeffs(ctx, r, s)
                assert pair.apply(ctx.term(r), ctx.term(s)) == ctx.term(r + s)


class TestRecurrence:
    def test_fibonomial(self, fib):
        assert recurrence_binomial(fib, "u", 6, 3) == 60 == fibonomial_oracle(6, 3)

    def test_lucas_v(self, lucas):
        assert recurrence_binomial(lucas, "v", 4, 2) == Fraction(28, 3)

    @pytest.mark.parametrize("rule", ["u", "u-swapped", "fontene-left", "fontene-right"])
    def test_boundary(self, fib, rule):
        assert all(recurrence_binomial(fib, rule, n, n) == 1 for n in range(8))
        assert all(recurrence_binomial(fib, rule, n, 0) == 1 for n in range(8))

    def test_unknown_rule(self, fib):
        with pytest.raises(ValueError):
            coeff_pair(fib, "nope", 1, 1)

    def test_degenerate(self):
        with pytest.raises(DegenerateSequence):
            recurrence_binomial(SequenceContext(LucasParams(1, 1), U), "u", 5, 2)


class TestTriangle:
    def test_fibonomial_rows(self, fib):
        rows = build_triangle(fib, "u", 5).rows
        assert rows == [[1], [1, 1], [1, 1, 1], [1, 2, 2, 1], [1, 3, 6, 3, 1], [1, 5, 15, 15, 5, 1]]

    def test_gaussian_row(self):
        ctx = SequenceContext(LucasParams(3, 2), U)
        assert build_triangle(ctx, "factorial", 4).rows[4] == [1, 15, 35, 15, 1]

    def test_single_row(self, fib):
        assert build_triangle(fib, "u", 0).rows == [[1]]

    @pytest.mark.parametrize("rule", ["factorial", "u", "u-swapped", "fontene-left", "fontene-right"])
    def test_routes_agree(self, fib, rule):
        assert build_triangle(fib, rule, 15).rows == build_triangle(fib, "factorial", 15).rows

    def test_json_round_trip(self, lucas):
        tri = build_triangle(lucas, "v", 8)
        back = Triangle.from_json(tri.to_json())
        assert back == tri
        d = json.loads(tri.to_json())
        assert list(d) == ["family", "params", "rule", "rows"]
        assert d["rows"][4][2] == "28/3"
        assert tri.route == "recurrence"

    def test_csv(self, fib):
        assert build_triangle(fib, "u", 3).to_csv() == "1\n1,1\n1,1,1\n1,2,2,1\n"

    @pytest.mark.parametrize("family", [U, V])
    def test_symmetry(self, family):
        ctx = SequenceContext(LucasParams(2, -3), family)
        for row in build_triangle(ctx, "factorial", 12).rows:
            assert row == row[::-1]


@pytest.mark.parametrize("P, Q", [(1, -1), (3, 2), (4, 3), (2, -1), (-1, -1), (3, -2)])
def test_u_binomials_integral(P, Q):
    ctx = SequenceContext(LucasParams(P, Q), U)
    for row in build_triangle(ctx, "factorial", 30).rows:
        assert all(x.denominator == 1 for x in row)


@settings(max_examples=60, deadline=None)
@given(
    P=st.fractions(min_value=-3, max_value=3, max_denominator=3),
    Q=st.fractions(min_value=-3, max_value=3, max_denominator=3),
    n=st.integers(0, 8),
    data=st.data(),
)
def test_recurrence_equals_factorial(P, Q, n, data):
    if P * P == 4 * Q:
        return
    params = LucasParams(P, Q)
    kind, rules = data.draw(
        st.sampled_from(
            [
                (U, ["u", "u-swapped", "fontene-left", "fontene-right"]),
                (V, ["v", "fontene-left", "fontene-right"]),
                (horadam_h(3, 1), ["horadam", "fontene-right"]),
                (horadam_w(1, 2), ["horadam", "fontene-left"]),
            ]
        )
    )
    ctx = SequenceContext(params, kind)
    k = data.draw(st.integers(0, n))
    try:
        expected = factorial_binomial(ctx, n, k)
    except DegenerateSequence:
        return
    for rule in rules:
        assert rule in RULES
        try:
            assert recurrence_binomial(ctx, rule, n, k) == expected
        except SingularCoefficient:
            pass
