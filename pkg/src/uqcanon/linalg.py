"""Small dense linear algebra over Q(v), plus evaluation into GF(p).

Matrices are lists of rows of :class:`RationalCoeff`.  Sizes here are tiny
(weight-space dimensions), so nothing clever is needed.
"""

from __future__ import annotations

from .coeff import RONE, RZERO, LaurentPoly, RationalCoeff

PRIME = (1 << 61) - 1


class Singular(ArithmeticError):
    pass


def zeros(r, c):
    return [[RZERO] * c for _ in range(r)]


def identity(n):
    out = zeros(n, n)
    for k in range(n):
        out[k][k] = RONE
    return out


def matvec(m, x):
    out = []
    for row in m:
        acc = RZERO
        for a, b in zip(row, x):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def matmul(a, b):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    bt = [[b[r][c] for r in range(len(b))] for c in range(cols)]
    return [[_dot(row, col) for col in bt] for row in a]


def _dot(x, y):
    acc = RZERO
    for a, b in zip(x, y):
        if a and b:
            acc = acc + a * b
    return acc


def matadd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(c, a):
    c = RationalCoeff.of(c)
    return [[c * x if x else RZERO for x in row] for row in a]


def is_zero_matrix(a):
    return all(not x for row in a for x in row)


def shape(a, cols_if_empty=0):
    return (len(a), len(a[0]) if a else cols_if_empty)


def inverse(m):
    """Gauss-Jordan inverse; raises :class:`Singular`."""
    n = len(m)
    aug = [list(row) + [RONE if j == i else RZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        if p != RONE:
            aug[col] = [x / p if x else RZERO for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y if y else x for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def solve(m, b):
    """Solve ``m x = b`` for a square invertible ``m``."""
    return matvec(inverse(m), b)


def determinant(m):
    n = len(m)
    a = [list(r) for r in m]
    det = RONE
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return RZERO
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[col])]
    return det


# -- GF(p) -------------------------------------------------------------------


def eval_mod(f, t, tinv, p=PRIME):
    """Value of a Laurent polynomial at ``v = t`` in GF(p)."""
    if isinstance(f, RationalCoeff):
        num = eval_mod(f.num, t, tinv, p)
        den = eval_mod(f.den, t, tinv, p)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return num * pow(den, -1, p) % p
    if not f.coeffs:
        return 0
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * t + c) % p
    base = t if f.low >= 0 else tinv
    return acc * pow(base, abs(f.low), p) % p


class ModEchelon:
    """Incremental row echelon form over GF(p), used to pick pivots fast."""

    def __init__(self, p=PRIME):
        self.p = p
        self.rows = []  # (pivot position, normalized row)

    def reduce(self, vec):
        p = self.p
        vec = list(vec)
        for pos, row in self.rows:
            c = vec[pos]
            if c:
                vec = [(a - c * b) % p for a, b in zip(vec, row)]
        return vec

    def add(self, vec):
        """Insert ``vec``; return its pivot position or ``None`` if dependent."""
        vec = self.reduce(vec)
        pos = next((k for k, a in enumerate(vec) if a), None)
        if pos is None:
            return None
        inv = pow(vec[pos], -1, self.p)
        vec = [a * inv % self.p for a in vec]
        self.rows.append((pos, vec))
        return pos


def laurent_matrix_to_rational(m):
    return [[RationalCoeff.of(x) if isinstance(x, LaurentPoly) else x for x in row] for row in m]
