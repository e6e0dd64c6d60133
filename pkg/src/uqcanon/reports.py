"""Monomial bases, transition matrices, classical limits and highest-weight slices."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import cartan, oracles
from .canonical import InvariantViolation, check_characterization
from .coeff import NotPolynomial, format_laurent
from .crystal import vertex_label


class BadBound(ValueError):
    pass


def monomial_element(store, seq):
    """``E_{i1}^(m1) ... E_{ik}^(mk)`` built by left multiplications applied to the unit."""
    engine = store.engine
    x = engine.unit()
    for i, m in reversed(tuple(seq)):
        if m < 0:
            raise ValueError(f"negative multiplicity in {seq}")
        x = engine.mult("left", i, m, x)
    return x


def ordered_vertices(graph, nu):
    """Vertices at ``nu`` in increasing order of their s-strings."""
    datum = graph.datum
    verts = [b for b in graph.store.basis(nu)]
    return sorted(verts, key=lambda b: cartan.sequence_key(datum, b.s_string))


@dataclass
class TransitionReport:
    weight: tuple
    ids: list
    s_strings: list
    entries: list  # rows: monomials M_{s(b)}, columns: canonical b', both in increasing s-order
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def to_rows(self):
        header = ["monomial"] + [cartan.format_sequence(s) for s in self.s_strings]
        rows = [header]
        for s, row in zip(self.s_strings, self.entries):
            rows.append([cartan.format_sequence(s)] + [format_laurent(c) for c in row])
        return rows

    def to_json(self):
        return {
            "weight": list(self.weight),
            "ids": [vertex_label(v) for v in self.ids],
            "s_strings": [cartan.format_sequence(s) for s in self.s_strings],
            "entries": [[format_laurent(c) for c in row] for row in self.entries],
            "unitriangular": self.ok,
            "failures": self.failures,
        }


def transition_matrix(graph, nu, strict=True):
    """Expansion of ``M_{s(b)}`` in the canonical basis, rows and columns in increasing s-order.

    Checks: Laurent entries with non-negative coefficients, unit diagonal,
    and ``entry (s, s') != 0`` only when ``s' > s``.
    """
    store = graph.store
    nu = tuple(nu)
    verts = ordered_vertices(graph, nu)
    wb = store.basis(nu)
    pos = {b.index: k for k, b in enumerate(verts)}
    entries, failures = [], []
    for r, b in enumerate(verts):
        x = monomial_element(store, b.s_string)
        raw = wb.expand(x)
        row = [None] * len(verts)
        for idx, c in enumerate(raw):
            k = pos[idx]
            if not c.is_laurent():
                failures.append({"row": r, "col": k, "reason": f"non-polynomial entry {c}"})
                row[k] = None
                continue
            row[k] = c.as_laurent()
        entries.append(row)
    for r, row in enumerate(entries):
        for k, c in enumerate(row):
            if c is None:
                continue
            if k == r and c != 1:
                failures.append({"row": r, "col": k, "reason": f"diagonal entry {format_laurent(c)}"})
            elif k < r and c:
                failures.append({"row": r, "col": k, "reason": "entry below the diagonal"})
            if not c.is_nonnegative():
                failures.append({"row": r, "col": k, "reason": f"negative coefficient in {format_laurent(c)}"})
    rep = TransitionReport(nu, [b.id for b in verts], [b.s_string for b in verts], entries, failures)
    if strict and failures:
        raise InvariantViolation(f"transition matrix at {nu} is not unitriangular and positive", {"failures": failures})
    return rep


def classical_limit_report(graph, nu):
    """The transition matrix at ``v = 1``."""
    rep = transition_matrix(graph, nu, strict=False)
    out = []
    for row in rep.entries:
        if any(c is None for c in row):
            raise NotPolynomial(f"transition matrix at {nu} has a non-polynomial entry")
        out.append([c.at_one() for c in row])
    return out


# -- highest-weight slices ----------------------------------------------------------------


@dataclass
class HighestWeightSlice:
    bound: tuple
    weight: tuple
    ids: list

    @property
    def dimension(self):
        return len(self.ids)

    def to_json(self):
        return {"bound": list(self.bound), "weight": list(self.weight), "ids": [vertex_label(v) for v in self.ids], "dimension": self.dimension}


def check_bound(datum, d):
    d = tuple(int(x) for x in d)
    if len(d) != datum.n:
        raise BadBound(f"bound {d} has {len(d)} entries, datum has {datum.n} vertices")
    bad = [k + 1 for k, x in enumerate(d) if x < 1]
    if bad:
        raise BadBound(f"bound entries must be >= 1 (vertex {bad[0]} has {d[bad[0] - 1]})")
    return d


def blambda_slice(store, d, nu):
    """Canonical elements at ``nu`` with ``t*_i < d_i`` for every ``i``."""
    d = check_bound(store.datum, d)
    nu = tuple(nu)
    ids = [b.id for b in store.basis(nu) if all(t < di for t, di in zip(b.t_star, d))]
    return HighestWeightSlice(d, nu, ids)


def blambda_table(store, d):
    """Slices at every computed weight; also whether the top layer is already empty."""
    d = check_bound(store.datum, d)
    table = {nu: blambda_slice(store, d, nu) for nu in cartan.enumerate_weights(store.datum, store.max_height)}
    top = [s for nu, s in table.items() if sum(nu) == store.max_height]
    closed = all(s.dimension == 0 for s in top) if store.max_height > 0 else all(x == 1 for x in d)
    return table, closed


def blambda_oracle(datum, d):
    """Weight multiplicities of the module with highest weight ``d_i - 1`` (Freudenthal)."""
    lam = tuple(x - 1 for x in d)
    return oracles.freudenthal_multiplicities(datum, lam)


# -- dimension and characterization summaries -----------------------------------------------


def dims_table(store):
    datum = store.datum
    kostant = oracles.kostant_table(datum, store.max_height)
    rows = []
    for nu in cartan.enumerate_weights(datum, store.max_height):
        rows.append((nu, store.engine.dim(nu), kostant[nu]))
    return rows


@dataclass
class CharacterizationSummary:
    elements: int = 0
    bar_failures: list = field(default_factory=list)
    orthonormal_failures: list = field(default_factory=list)
    expansion_failures: list = field(default_factory=list)
    positive: int = 0
    certified_non_positive: list = field(default_factory=list)
    undecided: list = field(default_factory=list)

    @property
    def passed_without_positivity(self):
        return not (self.bar_failures or self.orthonormal_failures or self.expansion_failures)

    @property
    def passed(self):
        return self.passed_without_positivity and not self.certified_non_positive and not self.undecided

    def to_json(self):
        return {
            "elements": self.elements,
            "bar_failures": self.bar_failures,
            "orthonormality_failures": self.orthonormal_failures,
            "expansion_failures": self.expansion_failures,
            "positive_expansions": self.positive,
            "certified_non_positive": self.certified_non_positive,
            "undecided": self.undecided,
            "passed": self.passed,
        }


def characterization_summary(store):
    out = CharacterizationSummary()
    for nu in store.weights():
        out.elements += len(store.basis(nu))
        for f in check_characterization(store, nu):
            kind = f[0]
            if kind == "bar":
                out.bar_failures.append(vertex_label(f[1]))
            elif kind == "orthonormal":
                out.orthonormal_failures.append([vertex_label(f[1]), vertex_label(f[2]), f[3]])
            elif kind in ("expansion", "bar-expansion"):
                out.expansion_failures.append(vertex_label(f[1]))
        for b in store.basis(nu):
            if b.monomial_expansion is not None:
                out.positive += 1
            elif b.positivity_certificate is not None:
                t, y = b.positivity_certificate
                out.certified_non_positive.append({"id": vertex_label(b.id), "v": str(t), "functional": [str(a) for a in y]})
            else:
                out.undecided.append(vertex_label(b.id))
    return out
