import pytest
from hypothesis import given
from hypothesis import strategies as st

from uqcanon import cartan
from uqcanon.coeff import RationalCoeff, quantum_binomial, vpow
from uqcanon.engine import UPlusEngine, WeightOutOfRange
from uqcanon.free_algebra import DividedMonomial, FormalElement, FormPairing, serre_element

from conftest import lp

A2 = cartan.preset("A2")


@pytest.fixture(scope="module")
def eng():
    return UPlusEngine(A2, 5).build_all()


@pytest.fixture(scope="module")
def eng1():
    return UPlusEngine(cartan.preset("A1"), 5).build_all()


def test_dimension_examples(eng, eng1):
    sp = eng.space((1, 1))
    assert sp.dim == 2 and len(sp.monomials) == 2
    sp = eng.space((2, 1))
    assert sp.dim == 2 and len(sp.monomials) == 3
    for n in range(6):
        sp1 = eng1.space((n,))
        assert sp1.dim == 1
        assert sp1.pivot_monomials == [DividedMonomial(((0, n),)) if n else DividedMonomial(())]


def test_serre_combination_has_zero_coordinates(eng):
    s = serre_element(A2, 0, 1)
    acc = eng.zero(s.weight)
    for m, c in s.terms.items():
        acc = acc + eng.monomial(m.seq).scale(c)
    assert acc.is_zero()


def test_every_monomial_reproduces_its_pairings(eng):
    fp = FormPairing(A2)
    for nu in [(2, 1), (1, 2), (2, 2), (3, 2)]:
        sp = eng.space(nu)
        for m in sp.monomials:
            x = eng.monomial(m.seq)
            for p in sp.pivot_monomials:
                direct = fp.pair(p, FormalElement.monomial(2, m))
                assert eng.form(eng.monomial(p.seq), x) == direct


def test_multiplication_examples(eng, eng1):
    e = eng1.monomial(((0, 1),))
    assert eng1.mult("left", 0, 1, e) == eng1.monomial(((0, 2),)).scale(lp("v + v^-1"))
    e2 = eng.monomial(((1, 1),))
    assert eng.mult("left", 0, 1, e2) == eng.monomial(((0, 1), (1, 1)))
    e1 = eng.monomial(((0, 1),))
    assert eng.mult("right", 1, 1, e1) == eng.monomial(((0, 1), (1, 1)))


@pytest.mark.parametrize("side", ["left", "right"])
def test_divided_powers_compose(eng, side):
    x = eng.monomial(((1, 1),))
    for a in range(1, 3):
        for b in range(1, 3):
            lhs = eng.mult(side, 0, a, eng.mult(side, 0, b, x))
            rhs = eng.mult(side, 0, a + b, x).scale(quantum_binomial(a + b, a))
            assert lhs == rhs


def test_out_of_range(eng):
    with pytest.raises(WeightOutOfRange):
        eng.mult("left", 0, 3, eng.monomial(((0, 2), (1, 1))))
    with pytest.raises(WeightOutOfRange):
        eng.space((4, 4))


def test_string_decomposition_examples(eng, eng1):
    parts = eng1.string_decompose(0, eng1.monomial(((0, 3),)))
    assert [p.is_zero() for p in parts] == [True, True, True, False]
    assert parts[3] == eng1.unit()
    e1e2 = eng.monomial(((0, 1), (1, 1)))
    x0, x1 = eng.string_decompose(0, e1e2)
    assert x0.is_zero() and x1 == eng.monomial(((1, 1),))
    e2e1 = eng.monomial(((1, 1), (0, 1)))
    x0, x1 = eng.string_decompose(0, e2e1)
    assert x1 == eng.monomial(((1, 1),)).scale(vpow(-1))
    assert x0 == e2e1 - e1e2.scale(vpow(-1))


def test_kashiwara_examples(eng):
    e2 = eng.monomial(((1, 1),))
    e1e2 = eng.monomial(((0, 1), (1, 1)))
    assert eng.kashiwara("eps", 0, e1e2) == e2
    assert eng.kashiwara("phi", 0, e2) == e1e2
    assert eng.kashiwara("eps", 0, e2).is_zero()
    assert eng.kashiwara("phi_star", 0, e2) == eng.monomial(((1, 1), (0, 1)))


coeffs = st.integers(-3, 3).map(RationalCoeff.of)


@given(st.lists(coeffs, min_size=3, max_size=3), st.sampled_from([0, 1]), st.sampled_from(["left", "right"]))
def test_string_decomposition_is_the_unique_kernel_split(eng, cs, i, side):
    nu = (2, 2)
    sp = eng.space(nu)
    x = eng.zero(nu)
    for c, m in zip(cs, sp.pivot_monomials):
        x = x + eng.monomial(m.seq).scale(c)
    parts = eng.string_decompose(i, x, side)
    back = eng.zero(nu)
    for N, xn in enumerate(parts):
        assert eng.derive(side, i, xn).is_zero()
        back = back + eng.mult(side, i, N, xn)
    assert back == x


def test_dimensions_do_not_depend_on_the_order():
    a3 = cartan.preset("A3")
    e1 = UPlusEngine(a3, 5).build_all()
    e2 = UPlusEngine(a3.with_order((2, 0, 1)), 5).build_all()
    for nu in cartan.enumerate_weights(a3, 5):
        assert e1.dim(nu) == e2.dim(nu)
