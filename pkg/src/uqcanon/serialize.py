"""Compact JSON encodings of weight-space models and canonical bases.

Laurent polynomials are ``[low, [c0, c1, ...]]`` and rational coefficients
``[num, den]``; everything else is plain lists.  Decoding rebuilds objects
equal to the originals, which the cache relies on.
"""

from __future__ import annotations

from fractions import Fraction

from .canonical import CanonicalVertex, WeightBasis
from .coeff import LaurentPoly, RationalCoeff
from .engine import AlgebraElement, WeightSpaceModel, words_of
from .free_algebra import DividedMonomial


def enc_laurent(p):
    return [p.low, list(p.coeffs)]


def dec_laurent(doc):
    return LaurentPoly(doc[0], tuple(doc[1]))


def enc_rat(c):
    return [enc_laurent(c.num), enc_laurent(c.den)]


def dec_rat(doc):
    return RationalCoeff(dec_laurent(doc[0]), dec_laurent(doc[1]), _reduced=True)


def _enc_matrix(m):
    return [[enc_rat(x) for x in row] for row in m]


def _dec_matrix(doc):
    return [[dec_rat(x) for x in row] for row in doc]


def _enc_seq(seq):
    return [[i, m] for i, m in seq]


def _dec_seq(doc):
    return tuple((int(i), int(m)) for i, m in doc)


# -- weight spaces -----------------------------------------------------------------


def model_to_doc(model):
    return {
        "weight": list(model.weight),
        "monomials": [_enc_seq(m.seq) for m in model.monomials],
        "wordvecs": [[enc_laurent(p) for p in vec] for vec in model.wordvecs],
        "pivots": list(model.pivots),
        "rows": list(model.rows),
        "det": enc_rat(model.det),
        "adj": _enc_matrix(model.adj),
        "coords": [[enc_rat(x) for x in c] for c in model.coords],
        "gram": _enc_matrix(model.gram),
        "left_ops": [[i, n, _enc_matrix(m)] for (i, n), m in sorted(model.left_ops.items())],
        "right_ops": [[i, n, _enc_matrix(m)] for (i, n), m in sorted(model.right_ops.items())],
        "lder": [[i, _enc_matrix(m)] for i, m in sorted(model.lder.items())],
        "rder": [[i, _enc_matrix(m)] for i, m in sorted(model.rder.items())],
    }


def model_from_doc(datum, doc):
    model = WeightSpaceModel(datum, tuple(doc["weight"]))
    model.monomials = [DividedMonomial(_dec_seq(s)) for s in doc["monomials"]]
    model.mono_index = {m: k for k, m in enumerate(model.monomials)}
    model.words = words_of(model.weight)
    model.wordvecs = [tuple(dec_laurent(p) for p in vec) for vec in doc["wordvecs"]]
    model.pivots = list(doc["pivots"])
    model.rows = list(doc["rows"])
    model.det = dec_rat(doc["det"])
    model.adj = _dec_matrix(doc["adj"])
    model.coords = [tuple(dec_rat(x) for x in c) for c in doc["coords"]]
    model.gram = _dec_matrix(doc["gram"])
    model.left_ops = {(i, n): _dec_matrix(m) for i, n, m in doc["left_ops"]}
    model.right_ops = {(i, n): _dec_matrix(m) for i, n, m in doc["right_ops"]}
    model.lder = {i: _dec_matrix(m) for i, m in doc["lder"]}
    model.rder = {i: _dec_matrix(m) for i, m in doc["rder"]}
    if len(model.wordvecs) != len(model.monomials) or any(len(v) != len(model.words) for v in model.wordvecs):
        raise ValueError("inconsistent weight-space document")
    return model


# -- canonical bases ---------------------------------------------------------------------


def _enc_id(vid):
    return [list(vid[0]), vid[1]]


def _dec_id(doc):
    return (tuple(doc[0]), int(doc[1]))


def basis_to_doc(wb):
    verts = []
    for b in wb.vertices:
        verts.append(
            {
                "index": b.index,
                "coords": [enc_rat(x) for x in b.coords],
                "fingerprint": [[lo, list(cs)] for lo, cs in b.fingerprint],
                "t": list(b.t),
                "t_star": list(b.t_star),
                "bottoms": [[side, i, _enc_id(bid)] for (side, i), bid in sorted(b.bottoms.items())],
                "expansion": None
                if b.monomial_expansion is None
                else [[_enc_seq(m.seq), enc_laurent(c)] for m, c in sorted(b.monomial_expansion.items())],
                "expansion_method": b.expansion_method,
                "certificate": None
                if b.positivity_certificate is None
                else [str(b.positivity_certificate[0]), [str(y) for y in b.positivity_certificate[1]]],
            }
        )
    transport = [[side, i, n, _enc_id(bid), idx] for (side, i, n, bid), idx in sorted(wb.transport.items())]
    return {"weight": list(wb.weight), "vertices": verts, "transport": transport}


def basis_from_doc(doc):
    nu = tuple(doc["weight"])
    verts = []
    for v in doc["vertices"]:
        b = CanonicalVertex(
            nu,
            int(v["index"]),
            AlgebraElement(nu, tuple(dec_rat(x) for x in v["coords"])),
            tuple((lo, tuple(cs)) for lo, cs in v["fingerprint"]),
            tuple(v["t"]),
            tuple(v["t_star"]),
        )
        b.bottoms = {(side, int(i)): _dec_id(bid) for side, i, bid in v["bottoms"]}
        if v["expansion"] is not None:
            b.monomial_expansion = {DividedMonomial(_dec_seq(s)): dec_laurent(c) for s, c in v["expansion"]}
        b.expansion_method = v["expansion_method"]
        if v["certificate"] is not None:
            t, ys = v["certificate"]
            b.positivity_certificate = (Fraction(t), [Fraction(y) for y in ys])
        verts.append(b)
    wb = WeightBasis(nu, verts)
    wb.transport = {(side, int(i), int(n), _dec_id(bid)): int(idx) for side, i, n, bid, idx in doc["transport"]}
    return wb
