"""Exact Lucas-type sequences and their generalized binomial coefficients."""

from .binomials import (
    FACTORIAL,
    RULES,
    CoefficientPair,
    Triangle,
    build_triangle,
    check_multinomial_product,
    coeff_pair,
    factorial_binomial,
    fontene_coeffs,
    horadam_h_coeffs,
    multinomial,
    recurrence_binomial,
    u_coeffs,
    v_coeffs,
)
from .errors import (
    DegenerateDiscriminant,
    DegenerateSequence,
    DiscriminantMismatch,
    DivisionByZero,
    Inconsistency,
    IndexOutOfRange,
    LucanomialError,
    NotRational,
    SingularCoefficient,
)
from .quadfield import LucasParams, QuadraticSurd, as_rational, make_rational, root_p, root_q
from .sequences import (
    U,
    V,
    SequenceContext,
    SequenceKind,
    check_addition_u,
    check_addition_v,
    check_shift_identities,
    custom,
    derive_closed_form_weights,
    horadam_h,
    horadam_w,
    lucas_pair,
    term,
    term_closed_form,
)

__version__ = "0.1.0"
