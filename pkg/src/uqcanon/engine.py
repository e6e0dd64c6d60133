"""Weight spaces of U_q^+ realised through the word embedding.

An element ``x`` of weight ``nu`` is determined by the values
``D_w(x) = (_{w_k} r ... _{w_1} r)(x)`` over all words ``w`` of weight ``nu``
(apply ``_{w_1} r`` first).  The form satisfies
``(E_{w_1} ... E_{w_k}, x) = (1 - v^-2)^{-k} D_w(x)``, so the kernel of ``D``
is exactly the radical and no relation is ever written down.  In these terms

* ``_i r`` prepends ``i`` to the word and ``r_i`` appends it,
* left multiplication by ``E_i`` is a twisted insertion of the letter ``i``.

Coordinates of an element are taken against pivot monomials chosen greedily
in the monomial order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import cartan, linalg
from .coeff import RONE, RZERO, ZERO, LaurentPoly, RationalCoeff, quantum_factorial, vpow
from .free_algebra import DividedMonomial, enumerate_monomials, word_pairing_factor


class EngineError(RuntimeError):
    pass


class WeightOutOfRange(EngineError):
    pass


class PivotFailure(EngineError):
    """No evaluation point gave an exactly verifiable pivot choice."""


# -- words -------------------------------------------------------------------


@lru_cache(maxsize=None)
def words_of(nu):
    """All words of weight ``nu``, lexicographic."""
    letters = []
    for i, k in enumerate(nu):
        letters.extend([i] * k)
    return tuple(sorted(set(itertools.permutations(letters))))


@lru_cache(maxsize=None)
def _index(nu):
    return {w: k for k, w in enumerate(words_of(nu))}


@lru_cache(maxsize=None)
def _insertion_table(matrix, nu, i, side):
    """For each word at ``nu``: [(index of w with one letter i removed, exponent)].

    ``side='left'`` realises ``D(E_i y)``, ``'right'`` realises ``D(y E_i)``.
    """
    lower = _index(cartan.shifted(nu, i, -1))
    row = matrix[i]
    table = []
    for w in words_of(nu):
        entries = []
        for p, letter in enumerate(w):
            if letter != i:
                continue
            rest = w[:p] + w[p + 1:]
            others = w[:p] if side == "left" else w[p + 1:]
            entries.append((lower[rest], sum(row[j] for j in others)))
        table.append(tuple(entries))
    return tuple(table)


def insert_letter(matrix, nu, i, vec, side="left"):
    """Word vector of ``E_i y`` (or ``y E_i``) at weight ``nu`` from that of ``y``."""
    out = []
    for entries in _insertion_table(matrix, nu, i, side):
        acc = ZERO
        for k, e in entries:
            c = vec[k]
            if c:
                acc = acc + c.shift(e)
        out.append(acc)
    return out


def insert_divided(matrix, nu, i, a, vec, side="left"):
    """Word vector of ``E_i^(a) y`` (or ``y E_i^(a)``); target weight ``nu``."""
    base = cartan.shifted(nu, i, -a)
    cur = list(vec)
    for k in range(1, a + 1):
        cur = insert_letter(matrix, cartan.shifted(base, i, k), i, cur, side)
    if a > 1:
        f = quantum_factorial(a)
        cur = [c.exact_div(f) if c else c for c in cur]
    return cur


# -- elements ----------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraElement:
    weight: tuple
    coords: tuple

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.weight, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.weight, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraElement(self.weight, tuple(-a for a in self.coords))

    def scale(self, c):
        c = RationalCoeff.of(c)
        return AlgebraElement(self.weight, tuple(c * a if a else RZERO for a in self.coords))

    def is_zero(self):
        return not any(self.coords)

    def bar(self):
        # pivots are monomials, hence bar-fixed: bar acts coordinate-wise
        return AlgebraElement(self.weight, tuple(a.bar() for a in self.coords))

    def _check(self, other):
        if self.weight != other.weight:
            raise ValueError(f"weights differ: {self.weight} vs {other.weight}")


# -- weight-space model --------------------------------------------------------


class WeightSpaceModel:
    """Everything needed to compute inside ``U^+_nu``."""

    def __init__(self, datum, weight):
        self.datum = datum
        self.weight = tuple(weight)
        self.monomials = []
        self.mono_index = {}
        self.words = words_of(self.weight)
        self.wordvecs = []  # per monomial, tuple of LaurentPoly aligned with words
        self.pivots = []  # indices into monomials
        self.rows = []  # indices into words
        self.det = RONE
        self.adj = []  # dim x dim: adj = det * Emb[rows, pivots]^-1
        self.coords = []  # per monomial
        self.gram = []
        self.left_ops = {}  # (i, n) -> matrix from weight - n e_i
        self.right_ops = {}
        self.lder = {}  # i -> matrix to weight - e_i
        self.rder = {}

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def pivot_monomials(self):
        return [self.monomials[k] for k in self.pivots]

    def coords_of_wordvec(self, vec):
        """Pivot coordinates of the element with word vector ``vec``.

        Only rows in ``self.rows`` are read; the caller guarantees ``vec`` lies
        in the image of the embedding.
        """
        sub = [RationalCoeff.of(vec[r]) for r in self.rows]
        out = linalg.matvec(self.adj, sub)
        if self.det != RONE:
            out = [x / self.det if x else RZERO for x in out]
        return tuple(out)

    def wordvec_of_coords(self, coords):
        out = []
        for w in range(len(self.words)):
            acc = RZERO
            for c, k in zip(coords, self.pivots):
                e = self.wordvecs[k][w]
                if c and e:
                    acc = acc + c * e
            out.append(acc)
        return out

    def monomial_coords(self, m):
        return self.coords[self.mono_index[m]]

    def monomial_wordvec(self, m):
        return self.wordvecs[self.mono_index[m]]


def _monomial_wordvec(datum, nu, m, lower):
    if not m.seq:
        return (LaurentPoly.const(1),)
    i, a = m.seq[0]
    rest = DividedMonomial(m.seq[1:])
    below = lower[cartan.shifted(nu, i, -a)]
    return tuple(insert_divided(datum.matrix, nu, i, a, below.monomial_wordvec(rest)))


def _select_pivots(model, attempts=6):
    """Greedy pivots via GF(p) elimination, then exact verification."""
    p = linalg.PRIME
    for attempt in range(attempts):
        t = 1_000_003 + 7919 * attempt
        tinv = pow(t, -1, p)
        ech = linalg.ModEchelon(p)
        pivots, rows = [], []
        for k, vec in enumerate(model.wordvecs):
            pos = ech.add([linalg.eval_mod(c, t, tinv) for c in vec])
            if pos is not None:
                pivots.append(k)
                rows.append(pos)
        if _verify_pivots(model, pivots, rows):
            return
    raise PivotFailure(f"could not certify pivots at weight {model.weight}")


def _verify_pivots(model, pivots, rows):
    dim = len(pivots)
    model.pivots, model.rows = pivots, rows
    if dim == 0:
        model.det, model.adj = RONE, []
        model.coords = [() for _ in model.monomials]
        return all(not any(v) for v in model.wordvecs)
    sub = [[RationalCoeff.of(model.wordvecs[k][r]) for k in pivots] for r in rows]
    try:
        inv = linalg.inverse(sub)
    except linalg.Singular:
        return False
    det = linalg.determinant(sub)
    adj = linalg.matscale(det, inv)
    if not all(x.is_laurent() for row in adj for x in row) or not det.is_laurent():
        return False
    model.det, model.adj = det, adj
    # K = Emb[:, pivots] * adj, all Laurent; then K * vec[rows] must equal det * vec
    adj_l = [[x.as_laurent() for x in row] for row in adj]
    det_l = det.as_laurent()
    nwords = len(model.words)
    K = []
    for w in range(nwords):
        krow = []
        for c in range(dim):
            acc = ZERO
            for s, k in enumerate(pivots):
                e = model.wordvecs[k][w]
                if e and adj_l[s][c]:
                    acc = acc + e * adj_l[s][c]
            krow.append(acc)
        K.append(krow)
    pos_of = {k: s for s, k in enumerate(pivots)}
    coords = []
    for k, vec in enumerate(model.wordvecs):
        sub_v = [vec[r] for r in rows]
        for w in range(nwords):
            acc = ZERO
            for c in range(dim):
                if K[w][c] and sub_v[c]:
                    acc = acc + K[w][c] * sub_v[c]
            if acc != det_l * vec[w]:
                return False
        if k in pos_of:
            cv = [RZERO] * dim
            cv[pos_of[k]] = RONE
            coords.append(tuple(cv))
            continue
        raw = [sum((adj_l[s][c] * sub_v[c] for c in range(dim) if sub_v[c]), ZERO) for s in range(dim)]
        cv = tuple(RationalCoeff(x, det_l) if x else RZERO for x in raw)
        # greedy: a dependent monomial must lie in the span of earlier pivots
        if any(cv[s] for s, kk in enumerate(pivots) if kk > k):
            return False
        coords.append(cv)
    model.coords = coords
    return True


def build_weight_space(datum, nu, lower_spaces):
    """Build the model at ``nu``; ``lower_spaces`` maps every ``nu - k e_i`` to its model."""
    nu = tuple(nu)
    model = WeightSpaceModel(datum, nu)
    model.monomials = enumerate_monomials(datum, nu)
    model.mono_index = {m: k for k, m in enumerate(model.monomials)}
    model.wordvecs = [_monomial_wordvec(datum, nu, m, lower_spaces) for m in model.monomials]
    _select_pivots(model)
    _build_gram(model)
    _build_operators(model, lower_spaces)
    return model


def _build_gram(model):
    idx = _index(model.weight)
    piv = model.pivot_monomials
    rows = []
    for pm in piv:
        f = word_pairing_factor(pm)
        w = idx[pm.word()]
        rows.append([f * model.wordvecs[q][w] for q in model.pivots])
    model.gram = rows


def _build_operators(model, lower):
    datum, nu = model.datum, model.weight
    for i in datum.vertices:
        if nu[i] == 0:
            continue
        for n in range(1, nu[i] + 1):
            src = lower[cartan.shifted(nu, i, -n)]
            gen = DividedMonomial.gen(i, n)
            for side, store in (("left", model.left_ops), ("right", model.right_ops)):
                cols = []
                for q in src.pivot_monomials:
                    c, m = gen.times(q) if side == "left" else q.times(gen)
                    cols.append([x * c if x else RZERO for x in model.coords[model.mono_index[m]]])
                store[(i, n)] = _transpose(cols, model.dim)
        below = lower[cartan.shifted(nu, i, -1)]
        bidx = _index(below.weight)
        first = [(w, bidx[w[1:]]) for w in model.words if w[0] == i]
        last = [(w, bidx[w[:-1]]) for w in model.words if w[-1] == i]
        widx = _index(nu)
        for table, store in ((first, model.lder), (last, model.rder)):
            cols = []
            for k in model.pivots:
                vec = [ZERO] * len(below.words)
                for w, b in table:
                    vec[b] = model.wordvecs[k][widx[w]]
                cols.append(list(below.coords_of_wordvec(vec)))
            store[i] = _transpose(cols, below.dim)


def _transpose(cols, nrows):
    return [[col[r] for col in cols] for r in range(nrows)]


# -- the engine ------------------------------------------------------------------


class UPlusEngine:
    """All weight spaces of height at most ``max_height`` for one datum."""

    def __init__(self, datum, max_height):
        self.datum = datum
        self.max_height = max_height
        self.spaces = {}

    # building
    def space(self, nu):
        nu = tuple(nu)
        hit = self.spaces.get(nu)
        if hit is not None:
            return hit
        if any(c < 0 for c in nu) or sum(nu) > self.max_height or len(nu) != self.datum.n:
            raise WeightOutOfRange(f"weight {nu} outside the built range (max height {self.max_height})")
        lower = {}
        for i in self.datum.vertices:
            for k in range(1, nu[i] + 1):
                mu = cartan.shifted(nu, i, -k)
                lower[mu] = self.space(mu)
        model = build_weight_space(self.datum, nu, lower)
        self.spaces[nu] = model
        return model

    def build_all(self):
        for nu in cartan.enumerate_weights(self.datum, self.max_height):
            self.space(nu)
        return self

    def in_range(self, nu):
        return all(c >= 0 for c in nu) and sum(nu) <= self.max_height

    def dim(self, nu):
        if any(c < 0 for c in nu):
            return 0
        return self.space(nu).dim

    # elements
    def unit(self):
        return AlgebraElement(tuple([0] * self.datum.n), (RONE,))

    def zero(self, nu):
        if any(c < 0 for c in nu):
            return AlgebraElement(tuple(nu), ())
        return AlgebraElement(tuple(nu), tuple([RZERO] * self.space(nu).dim))

    def monomial(self, seq):
        """The element ``E_{i1}^(m1) ... E_{ik}^(mk)`` for any sequence."""
        c, m = DividedMonomial.of(seq)
        nu = m.weight(self.datum.n)
        sp = self.space(nu)
        return AlgebraElement(nu, sp.monomial_coords(m)).scale(c)

    def from_wordvec(self, nu, vec):
        return AlgebraElement(tuple(nu), self.space(nu).coords_of_wordvec(vec))

    def wordvec(self, x):
        return self.space(x.weight).wordvec_of_coords(x.coords)

    # operators
    def mult(self, side, i, n, x):
        """``E_i^(n) x`` (side='left') or ``x E_i^(n)`` (side='right')."""
        if n == 0:
            return x
        target = cartan.shifted(x.weight, i, n)
        if not self.in_range(target):
            raise WeightOutOfRange(f"E_{i + 1}^({n}) on weight {x.weight} leaves the built range")
        sp = self.space(target)
        ops = sp.left_ops if side == "left" else sp.right_ops
        return AlgebraElement(target, tuple(linalg.matvec(ops[(i, n)], x.coords)))

    def derive(self, side, i, x):
        """``_i r(x)`` (side='left') or ``r_i(x)`` (side='right')."""
        target = cartan.shifted(x.weight, i, -1)
        if x.weight[i] == 0:
            return AlgebraElement(target, ())
        sp = self.space(x.weight)
        ops = sp.lder if side == "left" else sp.rder
        return AlgebraElement(target, tuple(linalg.matvec(ops[i], x.coords)))

    def form(self, x, y):
        if x.weight != y.weight:
            raise ValueError(f"weights differ: {x.weight} vs {y.weight}")
        g = self.space(x.weight).gram
        return linalg._dot(x.coords, linalg.matvec(g, y.coords))

    # string decomposition
    def string_decompose(self, i, x, side="left"):
        """``[x_0, x_1, ...]`` with ``x = sum_N E_i^(N) x_N`` and each ``x_N`` killed by the derivation."""
        top = x.weight[i]
        powers = [x]
        for _ in range(top):
            powers.append(self.derive(side, i, powers[-1]))
        out = []
        for N in range(top + 1):
            acc = self.zero(cartan.shifted(x.weight, i, -N))
            for s in range(top - N + 1):
                term = self.mult(side, i, s, powers[s + N])
                coef = vpow(s * (s - 1) // 2) * (-1) ** s
                acc = acc + term.scale(coef)
            out.append(acc.scale(vpow(-(N * (N - 1) // 2))))
        return out

    def kashiwara(self, op, i, x):
        """``op`` in {'phi', 'eps', 'phi_star', 'eps_star'}."""
        side = "right" if op.endswith("_star") else "left"
        up = op.startswith("phi")
        parts = self.string_decompose(i, x, side)
        target = cartan.shifted(x.weight, i, 1 if up else -1)
        if any(c < 0 for c in target):
            return AlgebraElement(target, ())
        acc = self.zero(target)
        for N, xn in enumerate(parts):
            if xn.is_zero():
                continue
            if up:
                acc = acc + self.mult(side, i, N + 1, xn)
            elif N > 0:
                acc = acc + self.mult(side, i, N - 1, xn)
        return acc

    # operator matrices for identity checks
    def left_op(self, side, i, n, target):
        sp = self.space(target)
        ops = sp.left_ops if side == "left" else sp.right_ops
        if n == 0:
            return linalg.identity(sp.dim)
        return ops[(i, n)]

    def der_op(self, side, i, source):
        sp = self.space(source)
        return (sp.lder if side == "left" else sp.rder)[i]
