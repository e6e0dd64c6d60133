"""Independent reference computations used to check the main pipeline.

None of these touch the engine: roots come from reflecting simple roots,
dimensions from counting root partitions, module dimensions from
Freudenthal's recursion and Weyl's product formula, and the rank-two closed
form is checked with the free-algebra form only.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import cartan
from .free_algebra import DividedMonomial, FormalElement, FormPairing, enumerate_monomials


class NotFiniteType(ValueError):
    pass


def positive_roots(datum, limit=400):
    """Positive roots of a finite-type datum, in root coordinates."""
    n = datum.n
    simple = [cartan.unit(n, i) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                c = datum.pair_simple(beta, i)
                gamma = cartan.shifted(beta, i, -c)
                if min(gamma) < 0 or sum(gamma) == 0 or gamma in seen:
                    continue
                seen.add(gamma)
                nxt.append(gamma)
                if len(seen) > limit:
                    raise NotFiniteType(f"{datum.name or 'datum'} has more than {limit} positive roots")
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), r))


def affine_a1_roots(max_height):
    """Positive roots of the rank-two datum with a double bond, with multiplicity."""
    out = []
    for k in range(max_height + 1):
        for r in ((k + 1, k), (k, k + 1)):
            if sum(r) <= max_height:
                out.append((r, 1))
        if k >= 1 and 2 * k <= max_height:
            out.append(((k, k), 1))
    return out


def roots_with_multiplicity(datum, max_height):
    if datum.n == 2 and datum.a(0, 1) == -2:
        return affine_a1_roots(max_height)
    return [(r, 1) for r in positive_roots(datum) if sum(r) <= max_height]


def kostant_partition(roots, nu):
    """Number of ways to write ``nu`` as an unordered sum of positive roots.

    ``roots`` is a list of ``(root, multiplicity)``; a root of multiplicity
    ``m`` comes in ``m`` distinguishable colours.
    """
    nu = tuple(nu)
    expanded = []
    for r, mult in roots:
        expanded.extend([tuple(r)] * mult)

    @lru_cache(maxsize=None)
    def count(rest, k):
        if not any(rest):
            return 1
        if k == len(expanded):
            return 0
        r = expanded[k]
        total = 0
        cur = rest
        while min(cur) >= 0:
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, r))
        return total

    return count(nu, 0)


def kostant_table(datum, max_height):
    roots = roots_with_multiplicity(datum, max_height)
    return {nu: kostant_partition(roots, nu) for nu in cartan.enumerate_weights(datum, max_height)}


# -- highest-weight modules ----------------------------------------------------------


def weyl_dimension(datum, lam):
    """Weyl's dimension formula; ``lam`` in fundamental-weight coordinates."""
    num = Fraction(1)
    for alpha in positive_roots(datum):
        top = sum(a * (l + 1) for a, l in zip(alpha, lam))
        num *= Fraction(top, sum(alpha))
    assert num.denominator == 1
    return int(num)


def freudenthal_multiplicities(datum, lam, max_depth=None):
    """Multiplicity of ``lam - beta`` in V(lam), keyed by ``beta`` in N^I.

    Simply laced only (the form on roots is the Cartan matrix).
    """
    n = datum.n
    roots = positive_roots(datum)
    lam = tuple(lam)
    if max_depth is None:
        # lam - w0 lam has height at most 2 * height(lam in root coords); crude bound
        max_depth = 2 * sum(lam) * len(roots) + 1

    def pair(x, y):
        return cartan.pairing_weights(datum, x, y)

    def lam_dot(beta):
        return sum(b * l for b, l in zip(beta, lam))

    mult = {tuple([0] * n): 1}
    for h in range(1, max_depth + 1):
        layer_nonzero = False
        for beta in cartan.weights_of_height(n, h):
            # ((lam+rho)^2 - (mu+rho)^2) m(mu) = 2 sum_alpha sum_k (mu + k alpha, alpha) m(mu + k alpha)
            lhs = 2 * sum(b * (l + 1) for b, l in zip(beta, lam)) - pair(beta, beta)
            if lhs == 0:
                continue
            rhs = 0
            for alpha in roots:
                k = 1
                while True:
                    up = tuple(b - k * a for b, a in zip(beta, alpha))
                    if min(up) < 0:
                        break
                    m_up = mult.get(up, 0)
                    if m_up:
                        # (lam - up, alpha) where lam - up = mu + k alpha
                        rhs += (lam_dot(alpha) - pair(up, alpha)) * m_up
                    k += 1
            val = Fraction(2 * rhs, lhs)
            assert val.denominator == 1
            if val:
                mult[beta] = int(val)
                layer_nonzero = True
        if not layer_nonzero and h > 2 * len(roots):
            break
    return mult


def freudenthal_dimension(datum, lam):
    return sum(freudenthal_multiplicities(datum, lam).values())


# -- the rank-two closed form ------------------------------------------------------------


def a2_closed_form_monomials(nu):
    """``E1^(a) E2^(b) E1^(c)`` and ``E2^(a) E1^(b) E2^(c)`` with ``b >= a + c`` at weight ``nu``."""
    x, y = nu
    found = set()
    for outer, inner in ((0, 1), (1, 0)):
        tot_outer = x if outer == 0 else y
        b = y if outer == 0 else x
        for a in range(tot_outer + 1):
            c = tot_outer - a
            if b >= a + c:
                _, m = DividedMonomial.of(((outer, a), (inner, b), (outer, c)))
                found.add(m)
    return sorted(found)


def same_element(datum, a, b, pairing=None):
    """Whether monomials ``a`` and ``b`` agree in U^+, i.e. differ by a radical element.

    The radical of the form on the free algebra is the Serre ideal, so this
    is decided by pairing ``a - b`` against every monomial of the weight.
    """
    n = datum.n
    if a.weight(n) != b.weight(n):
        return False
    fp = pairing or FormPairing(datum)
    ya, yb = FormalElement.monomial(n, a), FormalElement.monomial(n, b)
    return all(fp.pair(m, ya) == fp.pair(m, yb) for m in enumerate_monomials(datum, a.weight(n)))


def distinct_elements(datum, monomials, pairing=None):
    """One representative for each element of U^+ among ``monomials``."""
    fp = pairing or FormPairing(datum)
    reps = []
    for m in monomials:
        if not any(same_element(datum, r, m, fp) for r in reps):
            reps.append(m)
    return reps


def check_almost_orthonormal(datum, monomials, pairing=None):
    """Test each candidate against the bar/integral/positive/almost-orthonormal characterization.

    Monomials are bar-invariant, integral and positive by construction, so
    the only checks with content are the pairings.  Candidates that are the
    same element of U^+ are merged first.  Returns a list of failures.
    """
    fp = pairing or FormPairing(datum)
    n = datum.n
    reps = distinct_elements(datum, monomials, fp)
    fails = []
    for a in reps:
        for b in reps:
            val = fp.pair(a, FormalElement.monomial(n, b))
            ok = val.in_one_plus_vinv_lattice() if a == b else val.in_vinv_lattice()
            if not ok:
                fails.append((a, b, val))
    return fails
