import copy

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uqcanon import cartan
from uqcanon.canonical import (
    CanonicalStore,
    NoSuchWeight,
    NotInLattice,
    NotIStringBottom,
    WeightMismatch,
    check_characterization,
    string_bottom,
)
from uqcanon.coeff import ONE, RZERO, RationalCoeff, one_minus_vinv2_power, vpow

from conftest import lp


def element_set(store, nu):
    return {b.coords for b in store.basis(nu)}


def mono(store, *seq):
    return store.engine.monomial(seq)


def by_element(store, x):
    b = store.basis(x.weight).find(x)
    assert b is not None, f"{x} is not canonical"
    return b


def test_a2_small_weights(a2_store):
    s = a2_store
    assert element_set(s, (1, 1)) == {mono(s, (0, 1), (1, 1)).coords, mono(s, (1, 1), (0, 1)).coords}
    assert element_set(s, (1, 2)) == {mono(s, (1, 2), (0, 1)).coords, mono(s, (0, 1), (1, 2)).coords}
    # E2 E1 E2 = E2^(2) E1 + E1 E2^(2)
    assert mono(s, (1, 1), (0, 1), (1, 1)) == mono(s, (1, 2), (0, 1)) + mono(s, (0, 1), (1, 2))


def test_rank_one_is_divided_powers(a1_store):
    for n in range(5):
        (b,) = a1_store.basis((n,)).vertices
        assert b.element == mono(a1_store, (0, n))
        assert b.t == (n,) and b.t_star == (n,)


def test_pairing_examples(a2_store):
    s = a2_store
    x, y = mono(s, (0, 1), (1, 1)), mono(s, (1, 1), (0, 1))
    assert s.pairing(x, y) == RationalCoeff(lp("v^-1"), one_minus_vinv2_power(2))
    e = mono(s, (0, 1))
    assert s.pairing(e, e) == RationalCoeff(ONE, one_minus_vinv2_power(1))
    assert s.pairing(x, s.engine.zero((1, 1))) == RZERO
    with pytest.raises(WeightMismatch):
        s.pairing(x, e)


def test_reduce_mod_lattice(a2_store):
    s = a2_store
    wb = s.basis((1, 2))
    for b in wb:
        unit = tuple(1 if k == b.index else 0 for k in range(len(wb)))
        assert s.reduce_mod_lattice(b.element) == unit
        assert s.reduce_mod_lattice(b.element.scale(vpow(-1))) == (0,) * len(wb)
    assert s.reduce_mod_lattice(mono(s, (1, 1), (0, 1), (1, 1))) == (1, 1)
    with pytest.raises(NotInLattice):
        s.reduce_mod_lattice(wb.vertices[0].element.scale(vpow(1)))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=3), st.sampled_from([(2, 2), (3, 1), (2, 3)]))
def test_lattice_reduction_reads_constant_terms(a2_store, cs, nu):
    wb = a2_store.basis(nu)
    x = a2_store.engine.zero(nu)
    want = []
    for b, (a0, a1) in zip(wb, cs):
        x = x + b.element.scale(RationalCoeff.of(a0) + RationalCoeff.of(vpow(-1)) * a1)
        want.append(a0)
    want += [0] * (len(wb) - len(want))
    assert list(a2_store.reduce_mod_lattice(x)) == want


def test_t_statistics_examples(a2_store, a1_store):
    s = a2_store
    b12 = by_element(s, mono(s, (0, 1), (1, 1)))
    b21 = by_element(s, mono(s, (1, 1), (0, 1)))
    assert (b12.t, b12.t_star) == ((1, 0), (0, 1))
    assert b21.t == (0, 1)
    assert s.t_statistics(b12) == ((1, 0), (0, 1))
    assert a1_store.t_statistics(a1_store.basis((3,)).vertices[0]) == ((3,), (3,))


def test_statistics_recomputed_by_crystal_operators(a2_store):
    for b in a2_store.vertices():
        assert a2_store.t_statistics(b) == (b.t, b.t_star)
        assert all(0 <= t <= c for t, c in zip(b.t, b.weight))


def test_pi_transport_examples(a2_store, a1_store):
    s = a2_store
    e2 = by_element(s, mono(s, (1, 1)))
    assert s.pi_transport(0, 1, e2).element == mono(s, (0, 1), (1, 1))
    assert s.pi_transport_star(0, 1, e2).element == mono(s, (1, 1), (0, 1))
    unit = a1_store.basis((0,)).vertices[0]
    for n in range(5):
        assert a1_store.pi_transport(0, n, unit).element == mono(a1_store, (0, n))
    e1 = by_element(s, mono(s, (0, 1)))
    with pytest.raises(NotIStringBottom):
        s.pi_transport(0, 1, e1)
    with pytest.raises(NoSuchWeight):
        s.pi_transport(0, 7, e2)


@pytest.mark.parametrize("side", ["left", "right"])
def test_transport_matches_crystal_operators(a2_store, side):
    s = a2_store
    for b0 in s.vertices():
        for i in s.datum.vertices:
            if b0.stat(side)[i]:
                continue
            for n in range(1, s.max_height - sum(b0.weight) + 1):
                got = s.pi_transport(i, n, b0, side)
                assert got.id == s.transported(side, i, n, b0).id
                assert got.stat(side)[i] == n
                assert string_bottom(s, got, i, side).id == b0.id


@pytest.mark.parametrize("side", ["left", "right"])
def test_transport_difference_lies_higher_on_the_string(a2_store, side):
    s, eng = a2_store, a2_store.engine
    for b0 in s.vertices():
        for i in s.datum.vertices:
            if b0.stat(side)[i]:
                continue
            for n in range(1, s.max_height - sum(b0.weight) + 1):
                diff = eng.mult(side, i, n, b0.element) - s.transported(side, i, n, b0).element
                parts = eng.string_decompose(i, diff, side)
                assert all(p.is_zero() for p in parts[: n + 1])


def test_characterization_holds_in_type_a2(a2_store):
    for nu in a2_store.weights():
        assert len(a2_store.basis(nu)) == a2_store.engine.dim(nu)
        assert check_characterization(a2_store, nu) == []


def test_double_bond_fails_only_positivity_and_with_a_certificate(db_store):
    # from height 4 on, some elements (e.g. E2^(2)E1E2 - E2^(3)E1) admit no
    # expansion in divided monomials with coefficients in N[v, v^-1]
    refuted = []
    for nu in db_store.weights():
        for f in check_characterization(db_store, nu):
            assert f[0] == "positivity", f
            b = db_store.vertex(f[1])
            assert b.monomial_expansion is None and b.positivity_certificate is not None
            refuted.append(f[1])
    assert refuted == [((1, 3), 1), ((2, 2), 1), ((2, 2), 4), ((3, 1), 1)]


def test_tampered_element_is_caught(a2_store):
    s = CanonicalStore(a2_store.engine)
    s.bases = dict(a2_store.bases)
    wb = copy.deepcopy(a2_store.basis((2, 1)))
    b = wb.vertices[0]
    b.element = b.element.scale(vpow(1))
    s.bases[(2, 1)] = wb
    kinds = {f[0] for f in check_characterization(s, (2, 1))}
    assert {"bar", "orthonormal", "expansion"} <= kinds


def test_ids_do_not_depend_on_the_order(a2_store):
    rev = CanonicalStore.for_datum(cartan.preset("A2", order=(1, 0)), 5).build_all()
    for nu in rev.weights():
        a = [(b.fingerprint, b.t, b.t_star) for b in a2_store.basis(nu)]
        c = [(b.fingerprint, b.t, b.t_star) for b in rev.basis(nu)]
        assert a == c
