from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uqcanon.coeff import (
    ONE,
    ZERO,
    LaurentPoly,
    NotExpandable,
    NotPolynomial,
    OutOfRange,
    RationalCoeff,
    bar_coeff,
    evaluate_classical,
    format_coeff,
    format_laurent,
    one_minus_vinv2_power,
    parse_coeff,
    parse_laurent,
    quantum_binomial,
    quantum_factorial,
    quantum_integer,
    symmetric_polynomial_part,
    v_infinity_valuation,
    vpow,
)

from conftest import lp, rc

laurents = st.builds(
    lambda low, cs: LaurentPoly(low, tuple(cs)),
    st.integers(-5, 5),
    st.lists(st.integers(-4, 4), max_size=5),
)
nonzero_laurents = laurents.filter(lambda p: not p.is_zero())
rationals = st.builds(lambda a, b: RationalCoeff(a, b), laurents, nonzero_laurents)
nonzero_rationals = st.builds(lambda a, b: RationalCoeff(a, b), nonzero_laurents, nonzero_laurents)


# -- Laurent polynomials -----------------------------------------------------------


def test_laurent_drops_zero_coefficients():
    p = LaurentPoly(-2, (0, 0, 3, 0))
    assert p == LaurentPoly(0, (3,))
    assert p.terms() == {0: 3}


def test_laurent_arithmetic():
    assert lp("v + v^-1") * lp("v - v^-1") == lp("v^2 - v^-2")
    assert lp("v^2 + 1").exact_div(lp("v + v^-1")) == lp("v")


def test_text_form_round_trip():
    p = lp("v^2 - 1 + 3*v^-4")
    assert format_laurent(p) == "v^2 - 1 + 3*v^-4"
    assert parse_laurent(format_laurent(p)) == p
    f = RationalCoeff(lp("v"), lp("1 - v^2"))
    assert parse_coeff(format_coeff(f)) == f


def test_parser_rejects_garbage():
    with pytest.raises(ValueError):
        parse_laurent("v^2 v")
    with pytest.raises(ValueError):
        parse_laurent("3*")


@given(laurents)
def test_parse_inverts_format(p):
    assert parse_laurent(format_laurent(p)) == p


# -- bar involution --------------------------------------------------------------------


def test_bar_examples():
    assert bar_coeff(rc("v^2 + 3")) == rc("v^-2 + 3")
    assert bar_coeff(rc("v + v^-1")) == rc("v + v^-1")
    assert bar_coeff(rc("1", "1 - v^-2")) == rc("1", "1 - v^2")


@given(rationals)
def test_bar_is_involutive(f):
    assert f.bar().bar() == f


@given(rationals, rationals)
def test_bar_is_a_ring_map(f, g):
    assert (f * g).bar() == f.bar() * g.bar()
    assert (f + g).bar() == f.bar() + g.bar()


# -- field arithmetic ------------------------------------------------------------------


@given(rationals, nonzero_rationals)
def test_division_is_exact(f, g):
    assert (f * g) / g == f


@given(rationals, rationals)
def test_canonical_form_is_structural(f, g):
    h = f + g
    assert h == RationalCoeff(h.num, h.den)
    assert hash(f * g) == hash(g * f)


def test_denominator_normalised():
    f = RationalCoeff(lp("2*v"), lp("-2 + 2*v^-2"))
    assert f.den.low == 0 and f.den.coeffs[-1] > 0
    assert f == RationalCoeff(lp("v^3"), lp("1 - v^2"))


# -- quantum numbers -------------------------------------------------------------------


def test_quantum_examples():
    assert quantum_integer(2) == lp("v + v^-1")
    assert quantum_binomial(2, 1) == lp("v + v^-1")
    assert quantum_binomial(4, 2) == lp("v^4 + v^2 + 2 + v^-2 + v^-4")
    assert quantum_factorial(3) == lp("v + v^-1") * lp("v^2 + 1 + v^-2")


def test_quantum_binomial_out_of_range():
    with pytest.raises(OutOfRange):
        quantum_binomial(2, 3)
    with pytest.raises(OutOfRange):
        quantum_binomial(3, -1)


@pytest.mark.parametrize("n", range(13))
def test_binomials_bar_symmetric_with_classical_limit(n):
    for k in range(n + 1):
        b = quantum_binomial(n, k)
        assert b.bar() == b
        assert evaluate_classical(b) == comb(n, k)


@given(st.integers(1, 12))
def test_quantum_integer_definition(n):
    # [n] (v - v^-1) = v^n - v^-n
    assert quantum_integer(n) * lp("v - v^-1") == vpow(n) - vpow(-n)


# -- behaviour at infinity -------------------------------------------------------------


def test_valuation_examples():
    f = RationalCoeff(lp("v^-1"), one_minus_vinv2_power(2))
    assert v_infinity_valuation(f) == 1
    assert f.in_vinv_lattice()
    g = RationalCoeff(ONE, one_minus_vinv2_power(1))
    assert v_infinity_valuation(g) == 0
    assert g.in_one_plus_vinv_lattice()
    assert not g.in_vinv_lattice()
    assert v_infinity_valuation(rc("v^2")) == -2
    assert v_infinity_valuation(RationalCoeff.of(ZERO)) == float("inf")


def test_expansion_of_inverse_square():
    f = RationalCoeff(ONE, one_minus_vinv2_power(2))
    assert f.expansion(7) == {0: 1, 2: 2, 4: 3, 6: 4}


def test_non_integral_expansion_is_not_in_lattice():
    f = RationalCoeff(lp("v^-1"), lp("2"))
    assert v_infinity_valuation(f) == 1
    assert not f.in_vinv_lattice()
    with pytest.raises(NotExpandable):
        symmetric_polynomial_part(RationalCoeff(lp("v"), lp("2")))


def test_symmetric_part_examples():
    f = RationalCoeff(lp("v + 2 + 5*v^-1"), ONE) + RationalCoeff(lp("v^-3"), one_minus_vinv2_power(1))
    assert symmetric_polynomial_part(f) == lp("v + 2 + v^-1")
    assert symmetric_polynomial_part(RationalCoeff(lp("v^-1"), one_minus_vinv2_power(3))) == ZERO
    assert symmetric_polynomial_part(RationalCoeff(ONE, one_minus_vinv2_power(1))) == ONE


@given(laurents, st.integers(0, 3))
def test_symmetric_part_leaves_small_remainder(p, k):
    # f regular at infinity with integer expansion
    shift = max(p.high, 0) if p.coeffs else 0
    f = RationalCoeff(p.shift(-shift), one_minus_vinv2_power(k))
    c = symmetric_polynomial_part(f)
    assert c.bar() == c
    assert v_infinity_valuation(f - c) >= 1


def test_classical_limit():
    assert evaluate_classical(lp("v + v^-1")) == 2
    assert evaluate_classical(ZERO) == 0
    assert evaluate_classical(quantum_binomial(4, 2)) == 6
    with pytest.raises(NotPolynomial):
        evaluate_classical(RationalCoeff(ONE, lp("1 - v^-2")))
