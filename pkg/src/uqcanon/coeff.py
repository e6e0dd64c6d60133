"""Exact coefficient arithmetic in the quantum parameter ``v``.

Two value types live here:

* :class:`LaurentPoly` -- integer Laurent polynomials, stored densely as a
  lowest exponent plus a tuple of coefficients.
* :class:`RationalCoeff` -- elements of Q(v) kept in a reduced canonical
  form, so equality and hashing are structural.

Everything is exact.  Expansions "at infinity" are power series in
``u = v^-1``; the lattice tests used by the canonical basis solver are
decided from the reduced form and cross-checked against truncated series.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd


class CoeffError(ValueError):
    pass


class OutOfRange(CoeffError):
    pass


class NotExpandable(CoeffError):
    pass


class NotPolynomial(CoeffError):
    pass


def _trim(low, coeffs):
    lo, hi = 0, len(coeffs)
    while lo < hi and coeffs[lo] == 0:
        lo += 1
    while hi > lo and coeffs[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return 0, ()
    return low + lo, tuple(coeffs[lo:hi])


class LaurentPoly:
    """Integer Laurent polynomial ``sum c_k v^k``."""

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, low=0, coeffs=()):
        self.low, self.coeffs = _trim(low, coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, low, coeffs):
        obj = cls.__new__(cls)
        obj.low, obj.coeffs = low, coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_dict(cls, terms):
        terms = {k: c for k, c in terms.items() if c}
        if not terms:
            return ZERO
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(k, 0) for k in range(lo, hi + 1)])

    @classmethod
    def const(cls, c):
        return cls(0, (int(c),))

    @classmethod
    def monomial(cls, k, c=1):
        return cls(k, (int(c),))

    # -- inspection -----------------------------------------------------
    def is_zero(self):
        return not self.coeffs

    @property
    def high(self):
        """Top exponent (undefined for zero)."""
        return self.low + len(self.coeffs) - 1

    def terms(self):
        return {self.low + k: c for k, c in enumerate(self.coeffs) if c}

    def coeff(self, k):
        j = k - self.low
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0

    def bar(self):
        if not self.coeffs:
            return self
        return LaurentPoly._raw(-self.high, self.coeffs[::-1])

    def is_bar_symmetric(self):
        return self == self.bar()

    def at_one(self):
        return sum(self.coeffs)

    def shift(self, k):
        if not self.coeffs or k == 0:
            return self
        return LaurentPoly._raw(self.low + k, self.coeffs)

    def is_nonnegative(self):
        return all(c >= 0 for c in self.coeffs)

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.low == other.low and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == LaurentPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __neg__(self):
        return LaurentPoly._raw(self.low, tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        for k, c in enumerate(self.coeffs, self.low - lo):
            out[k] += c
        for k, c in enumerate(other.coeffs, other.low - lo):
            out[k] += c
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return LaurentPoly._raw(self.low, tuple(c * other for c in self.coeffs))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        if len(a) == 1:
            c = a[0]
            return LaurentPoly._raw(self.low + other.low, tuple(c * x for x in b))
        if len(b) == 1:
            c = b[0]
            return LaurentPoly._raw(self.low + other.low, tuple(c * x for x in a))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        # product of nonzero polys over Z has nonzero ends
        return LaurentPoly._raw(self.low + other.low, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, other):
        """Divide exactly by ``other``; raises NotPolynomial if it does not divide."""
        if not other.coeffs:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self.coeffs:
            return ZERO
        num = list(self.coeffs)
        den = other.coeffs
        lead = den[-1]
        m = len(den)
        if len(num) < m:
            raise NotPolynomial("inexact Laurent division")
        q = [0] * (len(num) - m + 1)
        for k in range(len(q) - 1, -1, -1):
            top = num[k + m - 1]
            if top % lead:
                raise NotPolynomial("inexact Laurent division")
            c = top // lead
            q[k] = c
            if c:
                for j, d in enumerate(den):
                    num[k + j] -= c * d
        if any(num):
            raise NotPolynomial("inexact Laurent division")
        return LaurentPoly(self.low - other.low, q)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"

    def __str__(self):
        return format_laurent(self)


ZERO = LaurentPoly._raw(0, ())
ONE = LaurentPoly._raw(0, (1,))
V = LaurentPoly._raw(1, (1,))
VINV = LaurentPoly._raw(-1, (1,))


def vpow(k):
    return LaurentPoly._raw(k, (1,))


# -- rational functions ---------------------------------------------------


def _poly_gcd(a, b):
    g = dup_gcd([ZZ(x) for x in a[::-1]], [ZZ(x) for x in b[::-1]], ZZ)
    return tuple(int(x) for x in g[::-1])


class RationalCoeff:
    """Element of Q(v) as ``num / den``.

    Canonical form: ``den`` is an ordinary polynomial with nonzero constant
    term and positive leading coefficient, and ``gcd(num, den) = 1`` in Z[v]
    (integer content included).  Powers of ``v`` live in ``num``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, int):
            num = LaurentPoly.const(num)
        if den is None:
            den = ONE
        elif isinstance(den, int):
            den = LaurentPoly.const(den)
        if not den.coeffs:
            raise ZeroDivisionError("zero denominator")
        self._hash = None
        if _reduced or (den.low == 0 and den.coeffs == (1,)):
            self.num, self.den = num, den
            return
        if not num.coeffs:
            self.num, self.den = ZERO, ONE
            return
        # move the v-power of den into num
        shift = den.low
        d = den.coeffs
        n = num.coeffs
        g = _poly_gcd(n, d)
        if len(g) > 1 or abs(g[0]) != 1:
            nq = LaurentPoly(0, n).exact_div(LaurentPoly(0, g))
            dq = LaurentPoly(0, d).exact_div(LaurentPoly(0, g))
            n, d = nq.coeffs, dq.coeffs
            nlow = num.low + nq.low - shift
        else:
            nlow = num.low - shift
        if d[-1] < 0:
            n = tuple(-x for x in n)
            d = tuple(-x for x in d)
        self.num = LaurentPoly._raw(nlow, tuple(n))
        self.den = LaurentPoly._raw(0, tuple(d))

    @classmethod
    def of(cls, x):
        if isinstance(x, RationalCoeff):
            return x
        if isinstance(x, LaurentPoly):
            return cls(x, ONE, _reduced=True)
        if isinstance(x, int):
            return cls(LaurentPoly.const(x), ONE, _reduced=True)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalCoeff")

    # -- inspection -----------------------------------------------------
    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_laurent(self):
        return self.den.coeffs == (1,)

    def as_laurent(self):
        if not self.is_laurent():
            raise NotPolynomial(f"{self} is not a Laurent polynomial")
        return self.num

    def __eq__(self, other):
        if isinstance(other, RationalCoeff):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, LaurentPoly)):
            return self == RationalCoeff.of(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic -----------------------------------------------------
    def __neg__(self):
        return RationalCoeff(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        if not isinstance(other, RationalCoeff):
            other = RationalCoeff.of(other)
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den == other.den:
            if self.den.coeffs == (1,):
                return RationalCoeff(self.num + other.num, ONE, _reduced=True)
            return RationalCoeff(self.num + other.num, self.den)
        return RationalCoeff(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RationalCoeff):
            other = RationalCoeff.of(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalCoeff):
            other = RationalCoeff.of(other)
        if not self.num.coeffs or not other.num.coeffs:
            return RZERO
        if self.den.coeffs == (1,) and other.den.coeffs == (1,):
            return RationalCoeff(self.num * other.num, ONE, _reduced=True)
        return RationalCoeff(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of zero")
        return RationalCoeff(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RationalCoeff):
            other = RationalCoeff.of(other)
        if not other.num.coeffs:
            raise ZeroDivisionError("division by zero")
        if other.den.coeffs == (1,) and len(other.num.coeffs) == 1:
            # dividing by a monomial keeps the form reduced up to sign
            c = other.num.coeffs[0]
            if abs(c) == 1:
                return RationalCoeff(self.num.shift(-other.num.low) * c, self.den, _reduced=True)
        return RationalCoeff(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalCoeff.of(other) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalCoeff(self.num**n, self.den**n)

    def bar(self):
        return RationalCoeff(self.num.bar(), self.den.bar())

    # -- behaviour at v = infinity ----------------------------------------
    def valuation(self):
        """Order of vanishing at ``v = oo``; ``None`` stands for +oo (zero)."""
        if not self.num.coeffs:
            return None
        return self.den.high - self.num.high

    def expansion(self, order):
        """Coefficients of ``v^-k`` for ``valuation <= k < order`` as a dict.

        Coefficients are ``Fraction`` when the leading coefficient of the
        denominator is not 1, plain ``int`` otherwise.
        """
        val = self.valuation()
        if val is None:
            return {}
        n = self.num.coeffs[::-1]
        d = self.den.coeffs[::-1]
        d0 = d[0]
        count = order - val
        out = {}
        series = []
        for k in range(max(count, 0)):
            acc = n[k] if k < len(n) else 0
            for j in range(1, min(k, len(d) - 1) + 1):
                acc -= d[j] * series[k - j]
            if d0 == 1:
                a = acc
            else:
                a = Fraction(acc, d0)
                if a.denominator == 1:
                    a = a.numerator
            series.append(a)
            if a:
                out[val + k] = a
        return out

    def has_integral_expansion(self):
        # reduced primitive form: integral v^-1 series iff den is monic at the top
        return self.den.coeffs[-1] == 1

    def is_regular_at_infinity(self):
        val = self.valuation()
        return val is None or val >= 0

    def in_vinv_lattice(self):
        """Membership in ``v^-1 Z[[v^-1]]``."""
        val = self.valuation()
        if val is None:
            return True
        return val >= 1 and self.has_integral_expansion()

    def in_one_plus_vinv_lattice(self):
        return (self - 1).in_vinv_lattice()

    def in_power_series_ring(self):
        """Membership in ``Z[[v^-1]]``."""
        val = self.valuation()
        if val is None:
            return True
        return val >= 0 and self.has_integral_expansion()

    def value_at_infinity(self):
        val = self.valuation()
        if val is None or val > 0:
            return 0
        if val < 0:
            raise NotExpandable(f"{self} has a pole at v = oo")
        return Fraction(self.num.coeffs[-1], self.den.coeffs[-1])

    def at_one(self):
        del_ = self.den.at_one()
        if del_ == 0:
            raise NotPolynomial(f"{self} has a pole at v = 1")
        return Fraction(self.num.at_one(), del_)

    def __repr__(self):
        return f"RationalCoeff({format_coeff(self)!r})"

    def __str__(self):
        return format_coeff(self)


RZERO = RationalCoeff(ZERO, ONE, _reduced=True)
RONE = RationalCoeff(ONE, ONE, _reduced=True)


def bar_coeff(f):
    return f.bar()


def v_infinity_valuation(f):
    """Order of vanishing at ``v = oo``; ``math.inf`` for zero."""
    val = RationalCoeff.of(f).valuation()
    return float("inf") if val is None else val


def symmetric_polynomial_part(f):
    """The bar-symmetric Laurent polynomial ``c`` with ``f - c`` in ``v^-1 Z[[v^-1]]``."""
    f = RationalCoeff.of(f)
    val = f.valuation()
    if val is None or val >= 1:
        return ZERO
    terms = {}
    for k, a in f.expansion(1).items():
        if isinstance(a, Fraction):
            raise NotExpandable(f"non-integral expansion coefficient {a} in {f}")
        # coefficient of v^-k, k <= 0
        terms[-k] = a
        if k < 0:
            terms[k] = a
    return LaurentPoly.from_dict(terms)


def evaluate_classical(f):
    if isinstance(f, RationalCoeff):
        f = f.as_laurent()
    if isinstance(f, int):
        return f
    return f.at_one()


# -- quantum numbers ------------------------------------------------------


@lru_cache(maxsize=None)
def quantum_integer(n):
    """``[n] = (v^n - v^-n) / (v - v^-1)``."""
    if n < 0:
        return -quantum_integer(-n)
    if n == 0:
        return ZERO
    return LaurentPoly(-(n - 1), [1 if k % 2 == 0 else 0 for k in range(2 * n - 1)])


@lru_cache(maxsize=None)
def quantum_factorial(n):
    if n < 0:
        raise OutOfRange(f"quantum factorial of {n}")
    out = ONE
    for k in range(2, n + 1):
        out = out * quantum_integer(k)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(n, k):
    """Balanced Gaussian binomial ``[n]!/([k]![n-k]!)``."""
    if n < 0 or k < 0 or k > n:
        raise OutOfRange(f"quantum binomial ({n}, {k})")
    k = min(k, n - k)
    num = ONE
    for j in range(n - k + 1, n + 1):
        num = num * quantum_integer(j)
    return num.exact_div(quantum_factorial(k))


def one_minus_vinv2_power(a):
    """``(1 - v^-2)^a`` as a Laurent polynomial (a >= 0)."""
    return LaurentPoly(-2, (-1, 0, 1)) ** a


# -- text form ------------------------------------------------------------


def _format_term(k, c, first):
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if k == 0:
        body = str(a)
    else:
        var = "v" if k == 1 else f"v^{k}"
        body = var if a == 1 else f"{a}*{var}"
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


def format_laurent(p):
    if not p.coeffs:
        return "0"
    out = []
    for k in range(p.high, p.low - 1, -1):
        c = p.coeff(k)
        if c:
            out.append(_format_term(k, c, not out))
    return "".join(out)


def format_coeff(f):
    if isinstance(f, LaurentPoly):
        return format_laurent(f)
    if f.is_laurent():
        return format_laurent(f.num)
    num = format_laurent(f.num)
    den = format_laurent(f.den)
    if sum(1 for c in f.num.coeffs if c) > 1:
        num = f"({num})"
    if sum(1 for c in f.den.coeffs if c) > 1:
        den = f"({den})"
    return f"{num} / {den}"


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*)?\s*(v(?:\s*\^\s*(-?\d+))?)?\s*")


def parse_laurent(text):
    """Parse ``"v^2 - 1 + 3*v^-4"`` style text."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if s in ("", "0"):
        return ZERO
    terms = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
        sign, digits, star, var, exp = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r} at {pos}")
        if digits is None and var is None:
            raise ValueError(f"empty term in {text!r} at {pos}")
        if star and (digits is None or var is None):
            raise ValueError(f"dangling '*' in {text!r}")
        c = int(digits) if digits is not None else 1
        if sign == "-":
            c = -c
        k = 0
        if var is not None:
            k = int(exp) if exp is not None else 1
        terms[k] = terms.get(k, 0) + c
        pos = m.end()
        first = False
    return LaurentPoly.from_dict(terms)


def parse_coeff(text):
    """Parse the text form of a coefficient: a Laurent polynomial or ``num / den``."""
    depth = 0
    for idx, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return RationalCoeff(parse_laurent(text[:idx]), parse_laurent(text[idx + 1 :]))
    return RationalCoeff.of(parse_laurent(text))
