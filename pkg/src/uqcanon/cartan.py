"""Symmetric Cartan data, weights, and the orders on vertices and sequences.

Vertices are 0-based everywhere inside the library; the text and JSON
interfaces shift to 1-based labels.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class CartanError(ValueError):
    """Raised for ill-formed Cartan data."""


class NonSymmetric(CartanError):
    pass


class BadDiagonal(CartanError):
    pass


class PositiveOffDiagonal(CartanError):
    pass


class BadOrder(CartanError):
    pass


class LengthMismatch(ValueError):
    pass


PRESETS = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "D4": [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]],
    "A1-double-bond": [[2, -2], [-2, 2]],
}


@dataclass(frozen=True)
class CartanDatum:
    """A symmetric generalized Cartan matrix with a total order on vertices.

    ``order`` lists the vertices from smallest to largest, so ``order[0]`` is
    the ≺-minimal vertex.
    """

    matrix: tuple
    order: tuple
    name: str = ""

    @property
    def n(self):
        return len(self.matrix)

    @property
    def vertices(self):
        return range(len(self.matrix))

    def rank_of(self, i):
        """Position of vertex ``i`` in the order (0 = smallest)."""
        return self._ranks[i]

    @property
    def _ranks(self):
        r = [0] * self.n
        for pos, i in enumerate(self.order):
            r[i] = pos
        return r

    def a(self, i, j):
        return self.matrix[i][j]

    def pair(self, nu, mu):
        return pairing_weights(self, nu, mu)

    def pair_simple(self, nu, i):
        """``(nu, e_i)``."""
        row = self.matrix[i]
        return sum(c * row[j] for j, c in enumerate(nu) if c)

    def with_order(self, order):
        return validate_cartan(self.matrix, order, name=self.name)

    def to_json(self):
        return {
            "matrix": [list(r) for r in self.matrix],
            "order": [i + 1 for i in self.order],
        }

    def canonical_key(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def is_finite_type(self):
        import numpy as np

        return bool(np.all(np.linalg.eigvalsh(np.array(self.matrix, dtype=float)) > 1e-9))


def validate_cartan(matrix, order=None, name=""):
    """Check the Cartan conditions and return a :class:`CartanDatum`.

    ``order`` is 0-based; ``None`` means the identity order.
    """
    n = len(matrix)
    rows = tuple(tuple(int(x) for x in row) for row in matrix)
    if any(len(r) != n for r in rows):
        raise CartanError("Cartan matrix must be square")
    for i in range(n):
        if rows[i][i] != 2:
            raise BadDiagonal(f"a[{i + 1}][{i + 1}] = {rows[i][i]} != 2")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise NonSymmetric(f"a[{i + 1}][{j + 1}] = {rows[i][j]} != a[{j + 1}][{i + 1}] = {rows[j][i]}")
            if i != j and rows[i][j] > 0:
                raise PositiveOffDiagonal(f"a[{i + 1}][{j + 1}] = {rows[i][j]} > 0")
    if order is None:
        order = tuple(range(n))
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(n)):
        raise BadOrder(f"vertex order {tuple(i + 1 for i in order)} is not a permutation of 1..{n}")
    return CartanDatum(rows, order, name)


def preset(name, order=None):
    if name not in PRESETS:
        raise CartanError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return validate_cartan(PRESETS[name], order, name=name)


def load_cartan(source, order=None):
    """Resolve a preset name or a JSON file ``{"matrix": ..., "order": ...}``.

    ``order`` (1-based, as in the JSON format) overrides the file's order.
    """
    if source in PRESETS:
        datum = preset(source)
        if order is not None:
            datum = datum.with_order([i - 1 for i in order])
        return datum
    path = Path(source)
    if not path.exists():
        raise CartanError(f"{source!r} is neither a preset nor a readable file")
    doc = json.loads(path.read_text())
    if "matrix" not in doc:
        raise CartanError(f"{source}: missing 'matrix'")
    file_order = doc.get("order")
    chosen = order if order is not None else file_order
    zero_based = None if chosen is None else [i - 1 for i in chosen]
    return validate_cartan(doc["matrix"], zero_based, name=path.stem)


# -- weights ---------------------------------------------------------------


def pairing_weights(datum, nu, mu):
    """``sum_ij nu_i mu_j a_ij``."""
    if len(nu) != datum.n or len(mu) != datum.n:
        raise LengthMismatch(f"weights of length {len(nu)} and {len(mu)} for rank {datum.n}")
    total = 0
    for i, x in enumerate(nu):
        if x:
            row = datum.matrix[i]
            total += x * sum(row[j] * y for j, y in enumerate(mu) if y)
    return total


def height(nu):
    return sum(nu)


def unit(n, i, k=1):
    out = [0] * n
    out[i] = k
    return tuple(out)


def add(nu, mu):
    return tuple(a + b for a, b in zip(nu, mu))


def sub(nu, mu):
    return tuple(a - b for a, b in zip(nu, mu))


def shifted(nu, i, k):
    out = list(nu)
    out[i] += k
    return tuple(out)


def enumerate_weights(datum, max_height):
    """All weights of height <= max_height, by height then lexicographically."""
    n = datum.n
    out = []
    for h in range(max_height + 1):
        out.extend(weights_of_height(n, h))
    return out


def weights_of_height(n, h):
    out = []
    for bars in itertools.combinations(range(h + n - 1), n - 1):
        parts, prev = [], -1
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(h + n - 1 - prev - 1)
        out.append(tuple(parts))
    return sorted(out)


# -- sequences and their order ----------------------------------------------


class Ordering(Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def sequence_weight(n, seq):
    out = [0] * n
    for i, m in seq:
        out[i] += m
    return tuple(out)


def normalize_sequence(seq):
    """Merge adjacent equal vertices and drop zero multiplicities.

    Returns ``(normalized, pairs_merged)`` where ``pairs_merged`` lists the
    ``(a, b)`` multiplicity pairs that were fused; the caller owns the
    quantum-binomial factor this produces.
    """
    out = []
    merged = []
    for i, m in seq:
        if m < 0:
            raise ValueError(f"negative multiplicity in {seq}")
        if m == 0:
            continue
        if out and out[-1][0] == i:
            a = out[-1][1]
            merged.append((a, m))
            out[-1] = (i, a + m)
        else:
            out.append((i, m))
    return tuple(out), merged


def pair_key(datum, pair):
    """Sort key for the order on vertex/multiplicity pairs.

    ``(j, m)`` is above ``(i, n)`` when ``i`` precedes ``j`` in the vertex
    order, or when ``i == j`` and ``m > n``.  This is the direction that makes
    string extraction from the largest vertex produce upper unitriangular
    monomial transitions.
    """
    i, m = pair
    return (datum.rank_of(i), m)


def sequence_key(datum, seq):
    return tuple(pair_key(datum, p) for p in seq)


def compare_sequences(datum, s1, s2):
    """Compare two sequences of equal weight; the first differing pair decides.

    Returns ``Ordering.LESS`` when ``s1`` is below ``s2``.
    """
    s1, s2 = tuple(s1), tuple(s2)
    if sequence_weight(datum.n, s1) != sequence_weight(datum.n, s2):
        return Ordering.INCOMPARABLE
    if s1 == s2:
        return Ordering.EQUAL
    for p, q in zip(s1, s2):
        if p != q:
            return Ordering.LESS if pair_key(datum, p) < pair_key(datum, q) else Ordering.GREATER
    # equal weight rules out a proper prefix
    raise AssertionError("unreachable: equal-weight sequences differ in length only")


def format_sequence(seq):
    """1-based text form ``((1,1),(2,1))``."""
    return "(" + ",".join(f"({i + 1},{m})" for i, m in seq) + ")"
