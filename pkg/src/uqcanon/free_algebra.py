"""The free algebra on divided powers E_i^(m), its two derivations, and
Lusztig's form on it computed by peeling generators.

Nothing here quotients by the radical; see :mod:`uqcanon.engine` for that.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import cartan
from .coeff import (
    ONE,
    RONE,
    RZERO,
    LaurentPoly,
    RationalCoeff,
    one_minus_vinv2_power,
    quantum_binomial,
    quantum_factorial,
    quantum_integer,
    vpow,
)


@dataclass(frozen=True, order=True)
class DividedMonomial:
    """``E_{i1}^(m1) ... E_{ik}^(mk)``, normalized (no adjacent repeats)."""

    seq: tuple = ()

    @classmethod
    def of(cls, seq):
        """Build from an arbitrary sequence; returns ``(coefficient, monomial)``.

        Adjacent repeats fuse as ``E^(a) E^(b) = [a+b choose a] E^(a+b)``.
        """
        norm, merged = cartan.normalize_sequence(tuple((int(i), int(m)) for i, m in seq))
        c = ONE
        for a, b in merged:
            c = c * quantum_binomial(a + b, a)
        return c, cls(norm)

    @classmethod
    def gen(cls, i, m=1):
        return cls(((i, m),)) if m else cls(())

    def weight(self, n):
        return cartan.sequence_weight(n, self.seq)

    @property
    def height(self):
        return sum(m for _, m in self.seq)

    def word(self):
        """The expanded word, e.g. E1^(2)E2 -> (0, 0, 1)."""
        out = []
        for i, m in self.seq:
            out.extend([i] * m)
        return tuple(out)

    def reversed(self):
        return DividedMonomial(tuple(reversed(self.seq)))

    def times(self, other):
        """Product ``self * other`` as ``(coefficient, monomial)``."""
        if not self.seq:
            return ONE, other
        if not other.seq:
            return ONE, self
        (i, a), (j, b) = self.seq[-1], other.seq[0]
        if i != j:
            return ONE, DividedMonomial(self.seq + other.seq)
        c = quantum_binomial(a + b, a)
        return c, DividedMonomial(self.seq[:-1] + ((i, a + b),) + other.seq[1:])

    def __str__(self):
        if not self.seq:
            return "1"
        parts = []
        for i, m in self.seq:
            parts.append(f"E{i + 1}" if m == 1 else f"E{i + 1}^({m})")
        return "".join(parts)

    def to_json(self):
        return [[i + 1, m] for i, m in self.seq]

    @classmethod
    def from_json(cls, doc):
        return cls(tuple((int(i) - 1, int(m)) for i, m in doc))


UNIT = DividedMonomial(())


class FormalElement:
    """A finite combination of divided monomials of a single weight."""

    __slots__ = ("weight", "terms")

    def __init__(self, weight, terms=None):
        self.weight = tuple(weight)
        self.terms = {}
        for m, c in (terms or {}).items():
            c = RationalCoeff.of(c)
            if c:
                self.terms[m] = c

    @classmethod
    def monomial(cls, n, m, c=RONE):
        return cls(m.weight(n), {m: c})

    @classmethod
    def zero(cls, weight):
        return cls(weight)

    def is_zero(self):
        return not self.terms

    def add_term(self, m, c):
        c = RationalCoeff.of(c)
        if not c:
            return
        old = self.terms.get(m)
        new = c if old is None else old + c
        if new:
            self.terms[m] = new
        else:
            del self.terms[m]

    def __add__(self, other):
        out = FormalElement(self.weight, self.terms)
        for m, c in other.terms.items():
            out.add_term(m, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = RationalCoeff.of(c)
        return FormalElement(self.weight, {m: x * c for m, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, FormalElement) and self.weight == other.weight and self.terms == other.terms

    def key(self):
        return (self.weight, frozenset(self.terms.items()))

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items()))


def left_multiply(n, m, x):
    """``m * x`` for a monomial ``m`` and a formal element ``x``."""
    out = FormalElement(cartan.add(m.weight(n), x.weight))
    for y, c in x.terms.items():
        k, z = m.times(y)
        out.add_term(z, c * k)
    return out


def right_multiply(n, x, m):
    out = FormalElement(cartan.add(m.weight(n), x.weight))
    for y, c in x.terms.items():
        k, z = y.times(m)
        out.add_term(z, c * k)
    return out


# -- enumeration -----------------------------------------------------------


@lru_cache(maxsize=None)
def _raw_monomials(nu):
    nu = tuple(nu)
    out = []

    def rec(rest, prev, acc):
        if not any(rest):
            out.append(tuple(acc))
            return
        for i, k in enumerate(rest):
            if k == 0 or i == prev:
                continue
            for m in range(1, k + 1):
                nxt = list(rest)
                nxt[i] -= m
                acc.append((i, m))
                rec(tuple(nxt), i, acc)
                acc.pop()

    rec(nu, None, [])
    return tuple(out)


def enumerate_monomials(datum, nu):
    """All normalized monomials of weight ``nu``, largest first in the sequence order."""
    seqs = _raw_monomials(tuple(nu))
    ranked = sorted(seqs, key=lambda s: (cartan.sequence_key(datum, s), s), reverse=True)
    return [DividedMonomial(s) for s in ranked]


# -- derivations -----------------------------------------------------------


@lru_cache(maxsize=None)
def _left_der_mono(matrix, i, seq):
    # _i r on a normalized monomial, as a tuple of (monomial, LaurentPoly coeff)
    if not seq:
        return ()
    (j, a), rest = seq[0], seq[1:]
    acc = {}

    def put(mono, c):
        old = acc.get(mono)
        acc[mono] = c if old is None else old + c

    if j == i:
        head = DividedMonomial(((j, a - 1),)) if a > 1 else UNIT
        k, z = head.times(DividedMonomial(rest))
        put(z, k * vpow(a - 1))
    if rest:
        twist = vpow(a * matrix[j][i])
        head = DividedMonomial(((j, a),))
        for mono, c in _left_der_mono(matrix, i, rest):
            k, z = head.times(mono)
            put(z, k * c * twist)
    return tuple((m, c) for m, c in acc.items() if c)


@lru_cache(maxsize=None)
def _right_der_mono(matrix, i, seq):
    if not seq:
        return ()
    front, (j, a) = seq[:-1], seq[-1]
    acc = {}

    def put(mono, c):
        old = acc.get(mono)
        acc[mono] = c if old is None else old + c

    if j == i:
        tail = DividedMonomial(((j, a - 1),)) if a > 1 else UNIT
        k, z = DividedMonomial(front).times(tail)
        put(z, k * vpow(a - 1))
    if front:
        twist = vpow(a * matrix[j][i])
        tail = DividedMonomial(((j, a),))
        for mono, c in _right_der_mono(matrix, i, front):
            k, z = mono.times(tail)
            put(z, k * c * twist)
    return tuple((m, c) for m, c in acc.items() if c)


def left_derivation(datum, i, x):
    """``_i r(x)``: Leibniz from the left with twist ``v^{(|left factor|, i)}``."""
    target = cartan.shifted(x.weight, i, -1)
    out = FormalElement(tuple(max(0, c) for c in target))
    if x.weight[i] == 0:
        return out
    for m, c in x.terms.items():
        for z, k in _left_der_mono(datum.matrix, i, m.seq):
            out.add_term(z, c * k)
    return out


def right_derivation(datum, i, x):
    """``r_i(x)``, the mirror image of :func:`left_derivation`."""
    target = cartan.shifted(x.weight, i, -1)
    out = FormalElement(tuple(max(0, c) for c in target))
    if x.weight[i] == 0:
        return out
    for m, c in x.terms.items():
        for z, k in _right_der_mono(datum.matrix, i, m.seq):
            out.add_term(z, c * k)
    return out


# -- the form ----------------------------------------------------------------


def generator_norm(a):
    """``(E_i^(a), E_i^(a)) = prod_{k=1..a} (1 - v^{-2k})^{-1}``."""
    den = ONE
    for k in range(1, a + 1):
        den = den * LaurentPoly(-2 * k, (-1,) + (0,) * (2 * k - 1) + (1,))
    return RONE / RationalCoeff.of(den)


def word_pairing_factor(m):
    """``K(m)`` with ``(m, y) = K(m) * D_{word(m)}(y)``."""
    den = one_minus_vinv2_power(m.height)
    for _, a in m.seq:
        den = den * quantum_factorial(a)
    return RONE / RationalCoeff.of(den)


class FormPairing:
    """Memoized evaluation of Lusztig's form on the free algebra.

    Peels one generator at a time from the left argument:
    ``(E_i E_i^(a-1) x, y) = (1-v^-2)^-1 (E_i^(a-1) x, _i r y)`` together with
    ``E_i^(a) = E_i E_i^(a-1) / [a]``.
    """

    def __init__(self, datum):
        self.datum = datum
        self.memo = {}
        self._c = RONE / RationalCoeff.of(one_minus_vinv2_power(1))

    def pair(self, m, y):
        """``(m, y)`` for a monomial ``m`` and formal element ``y``."""
        if m.weight(self.datum.n) != y.weight:
            return RZERO
        key = (m, y.key())
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if not m.seq:
            val = y.terms.get(UNIT, RZERO)
        else:
            (i, a), rest = m.seq[0], m.seq[1:]
            head = DividedMonomial(((i, a - 1),)) if a > 1 else UNIT
            _, m2 = head.times(DividedMonomial(rest))
            inner = self.pair(m2, left_derivation(self.datum, i, y))
            val = inner * self._c / RationalCoeff.of(quantum_integer(a))
        self.memo[key] = val
        return val

    def pair_elements(self, x, y):
        total = RZERO
        for m, c in x.terms.items():
            total = total + c * self.pair(m, y)
        return total


def gram_matrix(datum, nu, monomials=None, pairing=None):
    """Gram matrix of the form over ``enumerate_monomials(datum, nu)``."""
    mons = enumerate_monomials(datum, nu) if monomials is None else monomials
    fp = pairing or FormPairing(datum)
    n = datum.n
    rows = []
    for a in mons:
        rows.append([fp.pair(a, FormalElement.monomial(n, b)) for b in mons])
    return rows


def serre_element(datum, i, j):
    """``sum_k (-1)^k E_i^(k) E_j E_i^(1-a_ij-k)`` as a formal element."""
    top = 1 - datum.a(i, j)
    n = datum.n
    weight = cartan.add(cartan.unit(n, i, top), cartan.unit(n, j))
    out = FormalElement(weight)
    for k in range(top + 1):
        c, m = DividedMonomial.of(((i, k), (j, 1), (i, top - k)))
        out.add_term(m, c * (-1) ** k)
    return out
