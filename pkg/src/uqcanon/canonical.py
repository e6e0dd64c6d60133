"""The canonical basis of U^+ weight by weight, the lattice it spans, and
the string statistics computed from it.

Construction by transport along strings: every canonical element ``b`` of
nonzero weight has ``t_i(b) = n > 0`` for some ``i`` and then
``E_i^(n) b0 = b + sum c_L L`` with ``b0`` canonical, ``t_i(b0) = 0``, the sum
over canonical ``L`` with ``t_i(L) > n`` and bar-symmetric Laurent ``c_L``.
Processing ``n`` from the top down, every ``L`` in that sum is known when it
is needed, and pairing against them pins ``c`` down as the symmetric part of
``G^-1 p``.  The same is done with right multiplication; both must produce
the same set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import cartan, linalg
from .coeff import LaurentPoly, NotExpandable, RationalCoeff, symmetric_polynomial_part
from .engine import AlgebraElement, UPlusEngine, WeightOutOfRange

log = logging.getLogger(__name__)

SIDES = ("left", "right")


class CanonicalError(RuntimeError):
    pass


class InvariantViolation(CanonicalError):
    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


class NonConvergence(CanonicalError):
    pass


class WeightMismatch(ValueError):
    pass


class NotInLattice(ValueError):
    pass


class NotIStringBottom(ValueError):
    pass


class NoSuchWeight(LookupError):
    pass


@dataclass
class CanonicalVertex:
    weight: tuple
    index: int
    element: AlgebraElement
    fingerprint: tuple  # word vector as (low, coeffs) pairs; independent of pivots
    t: tuple
    t_star: tuple
    # (side, i) -> id of the bottom of the string through this vertex
    bottoms: dict = field(default_factory=dict)
    monomial_expansion: dict | None = None
    expansion_method: str | None = None
    positivity_certificate: tuple | None = None  # (t, y) refuting any N[v, v^-1] expansion
    s_string: tuple | None = None

    @property
    def id(self):
        return (self.weight, self.index)

    @property
    def coords(self):
        return self.element.coords

    def stat(self, side):
        return self.t if side == "left" else self.t_star


def _key(coords):
    return tuple(coords)


def _fingerprint(engine, x):
    out = []
    for c in engine.wordvec(x):
        if not c.is_laurent():
            raise InvariantViolation(f"non-integral word coordinate {c} at weight {x.weight}")
        p = c.as_laurent()
        out.append((p.low, p.coeffs))
    return tuple(out)


class WeightBasis:
    """The canonical basis at one weight plus the change-of-basis data."""

    def __init__(self, weight, vertices):
        self.weight = tuple(weight)
        self.vertices = vertices
        self.by_key = {_key(b.coords): b for b in vertices}
        # transport records: (side, i, n, bottom id) -> vertex index
        self.transport = {}
        n = len(vertices)
        cols = [list(b.coords) for b in vertices]
        self.matrix = [[cols[c][r] for c in range(n)] for r in range(n)]
        self.inverse = linalg.inverse(self.matrix) if n else []

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def find(self, x):
        return self.by_key.get(_key(x.coords))

    def expand(self, x):
        """Coefficients of ``x`` over the canonical basis."""
        if x.weight != self.weight:
            raise WeightMismatch(f"element of weight {x.weight} against basis at {self.weight}")
        return linalg.matvec(self.inverse, x.coords)

    def reduce(self, x):
        """Reduction modulo ``v^-1 L``: the value at ``v = oo`` of each coefficient."""
        out = []
        for c in self.expand(x):
            if not c.in_power_series_ring():
                raise NotInLattice(f"coefficient {c} is not in Z[[v^-1]]")
            out.append(int(c.value_at_infinity()))
        return tuple(out)


LatticeView = WeightBasis


def compute_canonical(engine, nu, lower):
    """Canonical basis at ``nu`` from the bases at every ``nu - n e_i`` in ``lower``.

    Returns a :class:`WeightBasis`; vertex order within the weight follows the
    pivot-independent fingerprint so that ids do not depend on the vertex order.
    """
    nu = tuple(nu)
    datum = engine.datum
    n_v = datum.n
    dim = engine.dim(nu)
    if not any(nu):
        b = CanonicalVertex(nu, 0, engine.unit(), _fingerprint(engine, engine.unit()), (0,) * n_v, (0,) * n_v)
        return WeightBasis(nu, [b])

    found = {}
    for side in SIDES:
        per_side = {}
        for i in datum.vertices:
            if nu[i] == 0:
                continue
            higher = []  # (key, element) with t_i greater than the current n
            for n in range(nu[i], 0, -1):
                src = lower[cartan.shifted(nu, i, -n)]
                level = []
                for b0 in src:
                    if b0.stat(side)[i] != 0:
                        continue
                    x = engine.mult(side, i, n, b0.element)
                    pi = _strip(engine, x, [h for _, h in higher], nu, side, i, n)
                    k = _key(pi.coords)
                    level.append((k, pi))
                    rec = per_side.setdefault(k, {"element": pi, "t": [0] * n_v, "bottoms": {}})
                    rec["t"][i] = n
                    rec["bottoms"][i] = (b0.id, n)
                higher.extend(level)
        if len(per_side) != dim:
            raise InvariantViolation(
                f"{side} transport gave {len(per_side)} elements at {nu}, expected {dim}",
                {"weight": list(nu), "side": side},
            )
        found[side] = per_side

    if set(found["left"]) != set(found["right"]):
        raise InvariantViolation(f"left and right transport disagree at {nu}", {"weight": list(nu)})

    raw = []
    for k, rec in found["left"].items():
        el = rec["element"]
        fp = _fingerprint(engine, el)
        raw.append((fp, k, rec, found["right"][k]))
    raw.sort(key=lambda r: r[0])
    vertices = []
    for idx, (fp, k, lrec, rrec) in enumerate(raw):
        b = CanonicalVertex(nu, idx, lrec["element"], fp, tuple(lrec["t"]), tuple(rrec["t"]))
        for i, (bid, _) in lrec["bottoms"].items():
            b.bottoms[("left", i)] = bid
        for i, (bid, _) in rrec["bottoms"].items():
            b.bottoms[("right", i)] = bid
        vertices.append(b)
    basis = WeightBasis(nu, vertices)
    for b in vertices:
        for i in datum.vertices:
            for side in SIDES:
                if b.stat(side)[i] > 0:
                    basis.transport[(side, i, b.stat(side)[i], b.bottoms[(side, i)])] = b.index
    return basis


def _strip(engine, x, higher, nu, side, i, n):
    """Remove the bar-symmetric multiples of ``higher`` from ``x``."""
    if not higher:
        return x
    p = [engine.form(x, h) for h in higher]
    g = [[engine.form(a, b) for b in higher] for a in higher]
    raw = linalg.solve(g, p)
    out = x
    for c, h in zip(raw, higher):
        try:
            s = symmetric_polynomial_part(c)
        except NotExpandable as exc:
            raise InvariantViolation(
                f"correction at {nu} (side {side}, i={i + 1}, n={n}) is not integral: {c}"
            ) from exc
        if s:
            out = out - h.scale(RationalCoeff.of(s))
    return out


# -- the store ---------------------------------------------------------------


class CanonicalStore:
    """Canonical bases for every weight up to the engine's height bound."""

    def __init__(self, engine: UPlusEngine, positivity=True):
        self.engine = engine
        self.datum = engine.datum
        self.bases = {}
        self.positivity = positivity
        self._mono_keys = {}

    @classmethod
    def for_datum(cls, datum, max_height, **kw):
        return cls(UPlusEngine(datum, max_height), **kw)

    @property
    def max_height(self):
        return self.engine.max_height

    def basis(self, nu):
        nu = tuple(nu)
        hit = self.bases.get(nu)
        if hit is not None:
            return hit
        if not self.engine.in_range(nu) or len(nu) != self.datum.n:
            raise NoSuchWeight(f"weight {nu} outside the computed range")
        lower = {}
        for i in self.datum.vertices:
            for k in range(1, nu[i] + 1):
                mu = cartan.shifted(nu, i, -k)
                lower[mu] = self.basis(mu)
        wb = compute_canonical(self.engine, nu, lower)
        self.bases[nu] = wb
        if self.positivity:
            from .positivity import attach_expansions

            attach_expansions(self, wb)
        return wb

    def build_all(self):
        for nu in cartan.enumerate_weights(self.datum, self.max_height):
            self.basis(nu)
        return self

    def weights(self):
        return sorted(self.bases, key=lambda w: (sum(w), w))

    def vertices(self):
        for nu in self.weights():
            yield from self.bases[nu]

    def vertex(self, vid):
        nu, idx = vid
        return self.basis(nu).vertices[idx]

    def lattice(self, nu):
        return self.basis(nu)

    # -- form and lattice --------------------------------------------------
    def pairing(self, x, y):
        if x.weight != y.weight:
            raise WeightMismatch(f"weights differ: {x.weight} vs {y.weight}")
        return self.engine.form(x, y)

    def reduce_mod_lattice(self, x):
        return self.basis(x.weight).reduce(x)

    def lift(self, nu, vec):
        """The canonical element whose reduction is the unit vector ``vec``, or ``None`` for zero."""
        if not any(vec):
            return None
        nz = [k for k, a in enumerate(vec) if a]
        if len(nz) != 1 or vec[nz[0]] != 1:
            raise InvariantViolation(f"reduction {vec} at {nu} is not a basis vector")
        return self.basis(nu).vertices[nz[0]]

    # -- crystal operators modulo v^-1 L ----------------------------------
    def crystal_step(self, op, i, b):
        """``op`` applied to ``b`` and read back as a canonical vertex (``None`` for zero)."""
        y = self.engine.kashiwara(op, i, b.element)
        if any(c < 0 for c in y.weight) or y.is_zero():
            return None
        return self.lift(y.weight, self.reduce_mod_lattice(y))

    def t_statistics(self, b):
        """``(t, t_star)`` by iterating the lowering operators modulo ``v^-1 L``."""
        out = []
        for op in ("eps", "eps_star"):
            vec = []
            for i in self.datum.vertices:
                k, cur = 0, b
                while True:
                    cur = self.crystal_step(op, i, cur)
                    if cur is None:
                        break
                    k += 1
                vec.append(k)
            out.append(tuple(vec))
        return tuple(out)

    def pi_transport(self, i, target_t, b0, side="left"):
        """``pi_{i,t}(b0)`` by ``t`` applications of the raising operator modulo ``v^-1 L``."""
        if b0.stat(side)[i] != 0:
            raise NotIStringBottom(f"vertex {b0.id} has t_{i + 1} = {b0.stat(side)[i]}")
        target = cartan.shifted(b0.weight, i, target_t)
        if not self.engine.in_range(target):
            raise NoSuchWeight(f"weight {target} outside the computed range")
        op = "phi" if side == "left" else "phi_star"
        cur = b0
        for _ in range(target_t):
            cur = self.crystal_step(op, i, cur)
        return cur

    def pi_transport_star(self, i, target_t, b0):
        return self.pi_transport(i, target_t, b0, side="right")

    def transported(self, side, i, n, b0):
        """The vertex recorded by the construction as ``pi_{i,n}(b0)``."""
        target = cartan.shifted(b0.weight, i, n)
        if n == 0:
            return b0
        idx = self.basis(target).transport.get((side, i, n, b0.id))
        if idx is None:
            raise InvariantViolation(f"no transport record for {b0.id} along {side} {i + 1}^{n}")
        return self.basis(target).vertices[idx]

    # -- monomials ------------------------------------------------------------
    def monomial_key_map(self, nu):
        hit = self._mono_keys.get(nu)
        if hit is None:
            sp = self.engine.space(nu)
            hit = {}
            for m in sp.monomials:
                hit.setdefault(_key(sp.monomial_coords(m)), m)
            self._mono_keys[nu] = hit
        return hit

    def element_of_expansion(self, nu, expansion):
        sp = self.engine.space(nu)
        acc = self.engine.zero(nu)
        for m, c in expansion.items():
            acc = acc + AlgebraElement(nu, sp.monomial_coords(m)).scale(RationalCoeff.of(c))
        return acc


def string_bottom(store, b, i, side="left"):
    """The bottom of the ``i``-string through ``b`` as recorded by the construction."""
    if b.stat(side)[i] == 0:
        return b
    return store.vertex(b.bottoms[(side, i)])


def check_characterization(store, nu):
    """Failures of bar invariance, integrality, positivity and almost orthonormality at ``nu``."""
    wb = store.basis(nu)
    fails = []
    for b in wb:
        if b.element.bar() != b.element:
            fails.append(("bar", b.id))
        exp = b.monomial_expansion
        if exp is None:
            fails.append(("positivity", b.id))
        else:
            if any(not isinstance(c, LaurentPoly) or not c.is_nonnegative() for c in exp.values()):
                fails.append(("positivity", b.id))
            if store.element_of_expansion(nu, exp) != b.element:
                fails.append(("expansion", b.id))
            bar_exp = {m: c.bar() for m, c in exp.items()}
            if store.element_of_expansion(nu, bar_exp) != b.element:
                fails.append(("bar-expansion", b.id))
    for b in wb:
        for c in wb:
            val = store.pairing(b.element, c.element)
            ok = val.in_one_plus_vinv_lattice() if b is c else val.in_vinv_lattice()
            if not ok:
                fails.append(("orthonormal", b.id, c.id, str(val)))
    return fails


__all__ = [
    "CanonicalError",
    "CanonicalStore",
    "CanonicalVertex",
    "InvariantViolation",
    "LatticeView",
    "NoSuchWeight",
    "NonConvergence",
    "NotInLattice",
    "NotIStringBottom",
    "WeightBasis",
    "WeightMismatch",
    "WeightOutOfRange",
    "check_characterization",
    "compute_canonical",
    "string_bottom",
]
