"""Expansions of canonical elements in divided monomials with coefficients in N[v, v^-1].

Pivot coordinates are one expansion, but monomials are linearly dependent
and that expansion is often not the positive one.  Three sources are tried,
cheapest first:

1. the element is itself a monomial;
2. the expansion inherited from the transport construction
   ``b = E_i^(n) b0 - sum c_L L`` when it happens to stay non-negative;
3. an integer feasibility search over all monomials of the weight with
   coefficients supported in a window of degrees.

Before the search, a separating functional at a real value of ``v`` is
looked for; when one exists no positive expansion exists at all, and the
certificate is stored on the vertex instead.

The search runs in floating point (scipy's MILP), but every answer it gives
is checked by exact recomputation before it is accepted.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from .coeff import ONE, LaurentPoly
from .free_algebra import DividedMonomial

log = logging.getLogger(__name__)

SEARCH_WINDOWS = (0, 1, 2, 3, 4)


def attach_expansions(store, wb):
    """Fill ``monomial_expansion`` for every vertex of ``wb`` in place."""
    nu = wb.weight
    keys = store.monomial_key_map(nu)
    pending = []
    for b in wb:
        m = keys.get(tuple(b.coords))
        if m is not None:
            b.monomial_expansion = {m: ONE}
            b.expansion_method = "monomial"
        else:
            pending.append(b)
    progress = True
    while pending and progress:
        progress = False
        for b in list(pending):
            exp = _from_construction(store, wb, b)
            if exp is not None:
                b.monomial_expansion = exp
                b.expansion_method = "construction"
                pending.remove(b)
                progress = True
    for b in pending:
        cert = positivity_obstruction(store, b)
        if cert is not None:
            b.positivity_certificate = cert
            log.info("%s has no non-negative monomial expansion (certificate at v = %s)", b.id, cert[0])
            continue
        exp = search_expansion(store, b)
        if exp is not None:
            b.monomial_expansion = exp
            b.expansion_method = "search"
        else:
            log.warning("no non-negative monomial expansion found for %s", b.id)


def _clean(exp):
    return {m: c for m, c in sorted(exp.items()) if c}


def _from_construction(store, wb, b):
    nu = b.weight
    for (side, i), bid in sorted(b.bottoms.items()):
        b0 = store.vertex(bid)
        if b0.monomial_expansion is None:
            continue
        n = b.stat(side)[i]
        gen = DividedMonomial.gen(i, n)
        exp = {}
        for m, a in b0.monomial_expansion.items():
            c, m2 = gen.times(m) if side == "left" else m.times(gen)
            exp[m2] = exp.get(m2, LaurentPoly()) + a * c
        x = store.engine.mult(side, i, n, b0.element)
        coeffs = wb.expand(x)
        ok = True
        for other, c in zip(wb.vertices, coeffs):
            if other is b or not c:
                continue
            if not c.is_laurent() or other.monomial_expansion is None:
                ok = False
                break
            cl = c.as_laurent()
            for m, a in other.monomial_expansion.items():
                exp[m] = exp.get(m, LaurentPoly()) - a * cl
        if not ok:
            continue
        exp = _clean(exp)
        if all(c.is_nonnegative() for c in exp.values()) and store.element_of_expansion(nu, exp) == b.element:
            return exp
    return None


def search_expansion(store, b, windows=SEARCH_WINDOWS):
    """Smallest bar-symmetric non-negative expansion found within the degree windows."""
    for width in windows:
        exp = _milp(store, b, width, symmetric=True)
        if exp is not None:
            return exp
    for width in windows:
        exp = _milp(store, b, width, symmetric=False)
        if exp is not None:
            return exp
    return None


def _milp(store, b, width, symmetric):
    from scipy.optimize import Bounds, LinearConstraint, milp

    nu = b.weight
    sp = store.engine.space(nu)
    target = store.engine.wordvec(b.element)
    target = [c.as_laurent() for c in target]
    # columns: (monomial index, degree shift) -> word vector contribution
    shifts = [(d,) if d == 0 or not symmetric else (d, -d) for d in (range(0, width + 1) if symmetric else range(-width, width + 1))]
    cols = []
    for k, vec in enumerate(sp.wordvecs):
        for sh in shifts:
            cols.append((k, sh))
    lows, highs = [], []
    for vec in list(sp.wordvecs) + [target]:
        for p in vec:
            if p:
                lows.append(p.low)
                highs.append(p.high)
    if not lows:
        return None
    lo = min(lows) - width
    hi = max(highs) + width
    span = hi - lo + 1
    nwords = len(sp.words)
    a = np.zeros((nwords * span, len(cols)))
    for c, (k, sh) in enumerate(cols):
        for w, p in enumerate(sp.wordvecs[k]):
            for e, coef in p.terms().items():
                for s in sh:
                    a[w * span + (e + s - lo), c] += coef
    rhs = np.zeros(nwords * span)
    for w, p in enumerate(target):
        for e, coef in p.terms().items():
            rhs[w * span + (e - lo)] = coef
    res = milp(
        c=np.ones(len(cols)),
        constraints=[LinearConstraint(a, rhs, rhs)],
        integrality=np.ones(len(cols)),
        bounds=Bounds(0, np.inf),
    )
    if res.x is None or res.status != 0:
        return None
    exp = {}
    for c, (k, sh) in enumerate(cols):
        amount = int(round(res.x[c]))
        if amount <= 0:
            continue
        m = sp.monomials[k]
        poly = LaurentPoly.from_dict({s: amount for s in sh})
        exp[m] = exp.get(m, LaurentPoly()) + poly
    exp = _clean(exp)
    if store.element_of_expansion(nu, exp) != b.element:
        log.debug("search answer at %s rejected by exact check", b.id)
        return None
    return exp


# -- obstructions ------------------------------------------------------------------


def _eval_at(c, t):
    num = sum(Fraction(a) * t**e for e, a in c.num.terms().items())
    den = sum(Fraction(a) * t**e for e, a in c.den.terms().items())
    return num / den


def positivity_obstruction(store, b, points=(Fraction(2), Fraction(3), Fraction(3, 2))):
    """A certificate that ``b`` has no expansion in monomials over N[v, v^-1].

    If ``b = sum a_m m`` with every ``a_m`` non-negative, then at any real
    ``v = t > 0`` the pivot coordinates of ``b`` lie in the cone spanned by
    those of the monomials.  A rational ``y`` with ``y . m(t) >= 0`` for every
    monomial and ``y . b(t) < 0`` rules that out.  Returns ``(t, y)`` with
    ``y`` as Fractions, verified exactly, or ``None``.
    """
    from scipy.optimize import linprog

    sp = store.engine.space(b.weight)
    dim = sp.dim
    for t in points:
        cols = [[_eval_at(c, t) for c in sp.coords[k]] for k in range(len(sp.monomials))]
        target = [_eval_at(c, t) for c in b.coords]
        scale = max(abs(x) for col in cols + [target] for x in col) or 1
        a_ub = -np.array([[float(x / scale) for x in col] for col in cols])
        for margin in (0.0, 1e-7, 1e-5):
            res = linprog(
                c=np.array([float(x / scale) for x in target]),
                A_ub=a_ub,
                b_ub=np.full(len(cols), -margin),
                bounds=[(-1, 1)] * dim,
            )
            if res.status != 0 or res.fun >= -1e-9:
                continue
            for den in (10**3, 10**6, 10**9):
                y = [Fraction(float(x)).limit_denominator(den) for x in res.x]
                if all(sum(a * c for a, c in zip(y, col)) >= 0 for col in cols) and sum(
                    a * c for a, c in zip(y, target)
                ) < 0:
                    return t, y
    return None


def integral_expansion(store, b, _memo=None):
    """An expansion of ``b`` in divided monomials over Z[v, v^-1], signs allowed.

    Built along the transport construction ``b = E_i^(n) b0 - sum c_L L``,
    so it exists exactly when every correction coefficient is a Laurent
    polynomial.  The result is checked against ``b`` before it is returned;
    ``None`` means no integral route was found.
    """
    memo = {} if _memo is None else _memo
    if b.id in memo:
        return memo[b.id]
    nu = b.weight
    if not any(nu):
        memo[b.id] = {DividedMonomial(()): ONE}
        return memo[b.id]
    keys = store.monomial_key_map(nu)
    m = keys.get(tuple(b.coords))
    if m is not None:
        memo[b.id] = {m: ONE}
        return memo[b.id]
    wb = store.basis(nu)
    memo[b.id] = None  # guards against cycles through the same weight
    for (side, i), bid in sorted(b.bottoms.items()):
        b0 = store.vertex(bid)
        base = integral_expansion(store, b0, memo)
        if base is None:
            continue
        n = b.stat(side)[i]
        gen = DividedMonomial.gen(i, n)
        exp = {}
        for m0, a in base.items():
            c, m2 = gen.times(m0) if side == "left" else m0.times(gen)
            exp[m2] = exp.get(m2, LaurentPoly()) + a * c
        coeffs = wb.expand(store.engine.mult(side, i, n, b0.element))
        ok = True
        for other, c in zip(wb.vertices, coeffs):
            if other is b or not c:
                continue
            sub = integral_expansion(store, other, memo) if c.is_laurent() else None
            if sub is None:
                ok = False
                break
            cl = c.as_laurent()
            for m1, a in sub.items():
                exp[m1] = exp.get(m1, LaurentPoly()) - a * cl
        if not ok:
            continue
        exp = _clean(exp)
        if store.element_of_expansion(nu, exp) == b.element:
            memo[b.id] = exp
            return exp
    return None
