"""Acceptance criteria 1-9 on the full data sets, all at exact equality.

Each test records its verdict under its criterion number; the verdicts are
printed as one PASS/FAIL line per criterion at the end of the run.
Criterion 2 is known to fail on positivity for A3 and the double bond: the
failing elements carry exact separating certificates, checked here, and the
full claim is kept as a strict xfail for those two data sets.
"""

import json
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from uqcanon import cartan, oracles
from uqcanon.canonical import check_characterization
from uqcanon.cli import main
from uqcanon.crystal import assign_s_strings, build_graph, connectivity, graph_signature, verify_lemma_suite
from uqcanon.free_algebra import enumerate_monomials
from uqcanon.identities import check_operator_identities
from uqcanon.pipeline import build_store
from uqcanon.positivity import integral_expansion
from uqcanon.reports import blambda_table, transition_matrix

DATA = ["a2_8", "a3_6", "db_6"]


@pytest.fixture
def record(verdicts):
    @contextmanager
    def ctx(criterion, note=None, expect_fail=False):
        ok = False
        try:
            yield
            ok = True
        finally:
            prev_ok, notes = verdicts.get(criterion, (True, []))
            if note and note not in notes:
                notes.append(note)
            verdicts[criterion] = (prev_ok and ok, notes)

    return ctx


def _graph(request, name, cache={}):
    if name not in cache:
        cache[name] = build_graph(request.getfixturevalue(name))
    return cache[name]


def _at(c, t):
    num = sum(Fraction(a) * t**e for e, a in c.num.terms().items())
    den = sum(Fraction(a) * t**e for e, a in c.den.terms().items())
    return num / den


def _certificate_holds(store, b):
    t, y = b.positivity_certificate
    for m in enumerate_monomials(store.datum, b.weight):
        col = store.engine.monomial(m.seq).coords
        if sum(a * _at(c, t) for a, c in zip(y, col)) < 0:
            return False
    return sum(a * _at(c, t) for a, c in zip(y, b.coords)) < 0


# -- 1 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name, h, budget", [("A2", 8, 60), ("A3", 6, 300)])
def test_c1_dimensions_match_kostant(record, name, h, budget):
    datum = cartan.preset(name)
    with record(1, f"{name} to height {h}"):
        t0 = time.perf_counter()
        roots = oracles.roots_with_multiplicity(datum, h)
        store = build_store(datum, h, positivity=False)
        weights = cartan.enumerate_weights(datum, h)
        for nu in weights:
            assert store.engine.dim(nu) == oracles.kostant_partition(roots, nu), nu
        assert time.perf_counter() - t0 < budget
        if name == "A2":
            assert store.engine.dim((1, 1)) == 2 and store.engine.dim((2, 1)) == 2


# -- 2 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name", DATA)
def test_c2_bar_integrality_orthonormality(request, record, name):
    store = request.getfixturevalue(name)
    with record(2):
        memo = {}
        for nu in store.weights():
            fails = [f for f in check_characterization(store, nu) if f[0] != "positivity"]
            assert fails == [], fails[:3]
            for b in store.basis(nu):
                assert integral_expansion(store, b, memo) is not None, b.id


@pytest.mark.parametrize("name", DATA)
def test_c2_non_positive_elements_are_certified(request, record, name):
    store = request.getfixturevalue(name)
    refuted = [b for b in store.vertices() if b.monomial_expansion is None]
    note = f"{name}: {len(refuted)} elements certified without an N[v,v^-1] monomial expansion"
    with record(2, note if refuted else None):
        for b in refuted:
            assert b.positivity_certificate is not None, b.id
            assert _certificate_holds(store, b), b.id
        for b in store.vertices():
            if b.monomial_expansion is not None:
                assert all(c.is_nonnegative() for c in b.monomial_expansion.values())
                assert store.element_of_expansion(b.weight, b.monomial_expansion) == b.element


@pytest.mark.parametrize(
    "name",
    [
        "a2_8",
        pytest.param("a3_6", marks=pytest.mark.xfail(strict=True, reason="positive monomial expansions do not exist")),
        pytest.param("db_6", marks=pytest.mark.xfail(strict=True, reason="positive monomial expansions do not exist")),
    ],
)
def test_c2_full_characterization(request, record, name):
    store = request.getfixturevalue(name)
    with record(2):
        fails = [f for nu in store.weights() for f in check_characterization(store, nu)]
        assert fails == []


def test_c2_known_counterexamples(a3_6, db_6):
    e = db_6.engine.monomial
    assert db_6.vertex(((1, 3), 1)).element == e(((1, 2), (0, 1), (1, 1))) - e(((1, 3), (0, 1)))
    e3 = a3_6.engine.monomial
    b = a3_6.vertex(((1, 3, 1), 1))
    assert b.element == e3(((1, 2), (2, 1), (0, 1), (1, 1))) - e3(((1, 3), (2, 1), (0, 1)))
    assert b.element.bar() == b.element
    assert a3_6.pairing(b.element, b.element).in_one_plus_vinv_lattice()


# -- 3 ---------------------------------------------------------------------------------


def test_c3_a2_closed_form(record, a2_8):
    eng = a2_8.engine
    with record(3, "A2 to height 8"):
        for nu in a2_8.weights():
            cands = oracles.a2_closed_form_monomials(nu)
            assert oracles.check_almost_orthonormal(a2_8.datum, cands) == []
            assert len(oracles.distinct_elements(a2_8.datum, cands)) == eng.dim(nu)
            closed = {tuple(eng.monomial(m.seq).coords) for m in cands}
            canon = {tuple(b.coords) for b in a2_8.basis(nu)}
            assert closed == canon, nu


# -- 4 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name", DATA)
def test_c4_operator_identities(request, record, name):
    store = request.getfixturevalue(name)
    with record(4):
        rep = check_operator_identities(store.engine)
        assert rep.passed, rep.failures[:3]


# -- 5 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name", DATA)
def test_c5_lemma_suite(request, record, name):
    with record(5):
        rep = verify_lemma_suite(_graph(request, name))
        assert rep.passed and rep.instances > 0


# -- 6 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name, second", [("a2_8", (1, 0)), ("a3_6", (2, 0, 1)), ("db_6", (1, 0))])
def test_c6_graph_structure(request, record, name, second):
    g = _graph(request, name)
    store = g.store
    with record(6):
        per = g.by_weight()
        for nu in store.weights():
            assert len(per.get(nu, ())) == store.engine.dim(nu)
        assert connectivity(g) == (True, True)
        assert len(set(assign_s_strings(g).values())) == len(g.vertices)
        other = build_store(store.datum.with_order(second), store.max_height)
        assert graph_signature(build_graph(other)) == graph_signature(g)


# -- 7 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name", DATA)
def test_c7_unitriangular(request, record, name):
    g = _graph(request, name)
    with record(7):
        for nu in g.store.weights():
            rep = transition_matrix(g, nu, strict=False)
            assert rep.failures == [], (nu, rep.failures[:2])


def test_c7_spot_value(request, record):
    g = _graph(request, "a2_8")
    with record(7, "A2 (1,2) off-diagonal entry 1"):
        rep = transition_matrix(g, (1, 2))
        assert rep.s_strings[0] == ((1, 1), (0, 1), (1, 1))
        assert [[c.at_one() if c else 0 for c in row] for row in rep.entries] == [[1, 1], [0, 1]]
        e = g.store.engine
        assert e.monomial(((1, 1), (0, 1), (1, 1))) == e.monomial(((1, 2), (0, 1))) + e.monomial(((0, 1), (1, 2)))


# -- 8 ---------------------------------------------------------------------------------


def test_c8_blambda(record, a2_8):
    with record(8, "A2 d=(2,2),(2,1),(1,2); rank 1 d=n+1 for n<=6"):
        for d, total in [((2, 2), 8), ((2, 1), 3), ((1, 2), 3)]:
            table, closed = blambda_table(a2_8, d)
            assert closed
            assert sum(s.dimension for s in table.values()) == total
            lam = tuple(x - 1 for x in d)
            assert sum(oracles.freudenthal_multiplicities(a2_8.datum, lam).values()) == total
            assert oracles.weyl_dimension(a2_8.datum, lam) == total
        a1 = build_store(cartan.preset("A1"), 7)
        for n in range(7):
            table, closed = blambda_table(a1, (n + 1,))
            assert closed and sum(s.dimension for s in table.values()) == n + 1


# -- 9 ---------------------------------------------------------------------------------


def test_c9_metadata_only(record, tmp_path):
    with record(9, "semicanonical numerics out of scope; shared indexing and order metadata emitted"):
        out = tmp_path / "o"
        assert main(["canonical", "--cartan", "A2", "--max-height", "3", "--out", str(out), "--no-figures"]) == 0
        assert main(["transition", "--cartan", "A2", "--max-height", "3", "--out", str(out), "--no-figures"]) == 0
        for fname in ("canonical.json", "transition.json"):
            doc = json.loads((out / fname).read_text())
            text = json.dumps(doc)
            assert "semicanonical" in text
            assert not any("semicanonical" in k and "matrix" in k for k in _keys(doc))
        canon = json.loads((out / "canonical.json").read_text())
        assert all("order_position" in el for w in canon["weights"] for el in w["elements"])
        trans = json.loads((out / "transition.json").read_text())
        assert "order_positions" in json.dumps(trans)


def _keys(doc):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield k
            yield from _keys(v)
    elif isinstance(doc, list):
        for v in doc:
            yield from _keys(v)
