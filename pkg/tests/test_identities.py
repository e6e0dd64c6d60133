import copy

import pytest

from uqcanon import cartan, linalg
from uqcanon.coeff import RationalCoeff, vpow
from uqcanon.engine import UPlusEngine
from uqcanon.identities import check_operator_identities, projector


@pytest.mark.parametrize("name, h", [("A1", 5), ("A2", 5), ("A1-double-bond", 4), ("A3", 3)])
def test_identities_hold(name, h):
    rep = check_operator_identities(UPlusEngine(cartan.preset(name), h).build_all())
    assert rep.passed, rep.failures[:3]
    assert set(rep.counts) == {f"{k}/{s}" for k in ("derivation-commutation", "projector-kernel", "completeness") for s in ("left", "right")}


def test_projector_rank_one():
    eng = UPlusEngine(cartan.preset("A1"), 3).build_all()
    # on E^(3) only P_3 survives and lands on the unit
    p3 = projector(eng, "left", 0, 3, (3,))
    assert p3 == [[RationalCoeff.of(vpow(3))]]
    p1 = projector(eng, "left", 0, 1, (3,))
    assert linalg.is_zero_matrix(p1)


def test_tampered_derivation_fails():
    eng = UPlusEngine(cartan.preset("A2"), 3).build_all()
    sp = eng.space((1, 1))
    sp.lder = copy.deepcopy(sp.lder)
    sp.lder[0] = linalg.matscale(RationalCoeff.of(vpow(1)), sp.lder[0])
    rep = check_operator_identities(eng)
    assert not rep.passed
    assert "derivation-commutation" in {f["identity"] for f in rep.failures}


def test_tampered_multiplication_fails():
    eng = UPlusEngine(cartan.preset("A2"), 3).build_all()
    sp = eng.space((2, 1))
    sp.right_ops = dict(sp.right_ops)
    sp.right_ops[(0, 2)] = linalg.matscale(RationalCoeff.of(2), sp.right_ops[(0, 2)])
    rep = check_operator_identities(eng)
    assert any(f["side"] == "right" for f in rep.failures)
