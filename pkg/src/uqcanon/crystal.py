"""The I x Z2 coloured graph on the canonical basis and the checks run on it.

Arrows of kind ``lower_plus`` (written i_+) move one step up an i-string for
left multiplication, ``upper_plus`` (i^+) one step up an i-string for right
multiplication.  Both come from the transport records of
:mod:`uqcanon.canonical`; i_- and i^- are their inverses.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from . import cartan
from .canonical import InvariantViolation, string_bottom

LOWER, UPPER = "lower_plus", "upper_plus"
KINDS = (LOWER, UPPER)
SIDE_OF = {LOWER: "left", UPPER: "right"}


class CutoffExceeded(LookupError):
    """The arrow leaves the computed range of weights."""


class UnknownFormat(ValueError):
    pass


def vertex_label(vid):
    nu, idx = vid
    return "-".join(str(c) for c in nu) + f"#{idx}"


@dataclass(frozen=True, order=True)
class Arrow:
    source: tuple
    target: tuple
    color: int
    kind: str


class ColoredGraph:
    def __init__(self, store, height_cutoff):
        self.store = store
        self.datum = store.datum
        self.height_cutoff = height_cutoff
        self.vertices = {}
        self.plus = {}  # (kind, i, id) -> id
        self.minus = {}  # (kind, i, id) -> id
        self.boundary = set()  # (kind, i, id) whose arrow leaves the range
        self.arrows = []

    @property
    def root(self):
        return (tuple([0] * self.datum.n), 0)

    def __len__(self):
        return len(self.vertices)

    def vertex(self, vid):
        return self.vertices[vid]

    def t(self, vid):
        return self.vertices[vid].t

    def t_star(self, vid):
        return self.vertices[vid].t_star

    def stat(self, kind, vid):
        return self.t(vid) if kind == LOWER else self.t_star(vid)

    def up(self, kind, i, vid):
        key = (kind, i, vid)
        if key in self.boundary:
            raise CutoffExceeded(f"{kind} {i + 1} from {vertex_label(vid)} leaves the range")
        return self.plus[key]

    def down(self, kind, i, vid):
        """``i_-`` or ``i^-``; ``None`` at the bottom of the string."""
        return self.minus.get((kind, i, vid))

    def up_power(self, kind, i, vid, k):
        for _ in range(k):
            vid = self.up(kind, i, vid)
        return vid

    def down_power(self, kind, i, vid, k):
        for _ in range(k):
            vid = self.down(kind, i, vid)
            if vid is None:
                return None
        return vid

    def by_weight(self):
        out = {}
        for vid in sorted(self.vertices, key=lambda v: (sum(v[0]), v)):
            out.setdefault(vid[0], []).append(vid)
        return out


def build_graph(store, height_cutoff=None):
    h = store.max_height if height_cutoff is None else height_cutoff
    if h > store.max_height:
        raise CutoffExceeded(f"cutoff {h} exceeds the computed height {store.max_height}")
    g = ColoredGraph(store, h)
    for nu in cartan.enumerate_weights(store.datum, h):
        for b in store.basis(nu):
            g.vertices[b.id] = b
    for vid, b in sorted(g.vertices.items(), key=lambda kv: (sum(kv[0][0]), kv[0])):
        for i in store.datum.vertices:
            target = cartan.shifted(b.weight, i, 1)
            for kind in KINDS:
                if sum(target) > h:
                    g.boundary.add((kind, i, vid))
                    continue
                side = SIDE_OF[kind]
                bottom = string_bottom(store, b, i, side)
                up = store.transported(side, i, b.stat(side)[i] + 1, bottom)
                g.plus[(kind, i, vid)] = up.id
                if (kind, i, up.id) in g.minus:
                    raise InvariantViolation(f"two {kind} {i + 1} arrows into {vertex_label(up.id)}")
                g.minus[(kind, i, up.id)] = vid
                g.arrows.append(Arrow(vid, up.id, i, kind))
    g.arrows.sort()
    assign_s_strings(g)
    return g


# -- s-strings ------------------------------------------------------------------------


def s_string(graph, vid):
    """Peel ``(i, t_i)`` for the highest-ranked ``i`` with ``t_i > 0``, descend by ``i_-``, repeat."""
    datum = graph.datum
    ranked = sorted(datum.vertices, key=datum.rank_of, reverse=True)
    seq = []
    cur = vid
    while any(cur[0]):
        t = graph.t(cur)
        i = next((j for j in ranked if t[j] > 0), None)
        if i is None:
            raise InvariantViolation(f"vertex {vertex_label(cur)} of nonzero weight has all t_i = 0")
        n = t[i]
        seq.append((i, n))
        cur = graph.down_power(LOWER, i, cur, n)
        if cur is None or graph.t(cur)[i] != 0:
            raise InvariantViolation(f"descent along {i + 1} from {vertex_label(vid)} is inconsistent")
    return tuple(seq)


def assign_s_strings(graph):
    seen = {}
    for vid in sorted(graph.vertices, key=lambda v: (sum(v[0]), v)):
        s = s_string(graph, vid)
        if s in seen:
            raise InvariantViolation(
                f"s-string {cartan.format_sequence(s)} shared by {vertex_label(seen[s])} and {vertex_label(vid)}"
            )
        seen[s] = vid
        graph.vertices[vid].s_string = s
    graph.s_index = seen
    return seen


# -- structural checks ------------------------------------------------------------------


def connectivity(graph):
    """BFS over lower_plus arrows: (reached all?, every distance equals the height)."""
    dist = {graph.root: 0}
    queue = deque([graph.root])
    while queue:
        v = queue.popleft()
        for i in graph.datum.vertices:
            w = graph.plus.get((LOWER, i, v))
            if w is not None and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    reached = len(dist) == len(graph.vertices)
    heights = all(d == sum(v[0]) for v, d in dist.items())
    return reached, heights


def graph_signature(graph):
    """Pivot-independent description: vertices by fingerprint with statistics, and arrows."""
    verts = tuple(sorted((vid, graph.vertices[vid].fingerprint, graph.t(vid), graph.t_star(vid)) for vid in graph.vertices))
    return verts, tuple(graph.arrows)


# -- the lemma suite ------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    description: str
    instances: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def fail(self, **where):
        self.failures.append({k: (vertex_label(v) if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], tuple) else v) for k, v in where.items()})


@dataclass
class LemmaReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def instances(self):
        return sum(c.instances for c in self.checks)

    def to_json(self):
        return {
            "passed": self.passed,
            "instances": self.instances,
            "checks": [
                {
                    "name": c.name,
                    "description": c.description,
                    "instances": c.instances,
                    "skipped": c.skipped,
                    "passed": c.passed,
                    "failures": c.failures[:50],
                }
                for c in self.checks
            ],
        }

    def lines(self):
        for c in self.checks:
            state = "PASS" if c.passed else f"FAIL ({len(c.failures)})"
            yield f"{c.name:<28} {state:<10} instances={c.instances} skipped={c.skipped}"


def verify_lemma_suite(graph):
    datum = graph.datum
    I = datum.vertices
    verts = sorted(graph.vertices, key=lambda v: (sum(v[0]), v))

    inverse = CheckResult("inverse", "i_- i_+ = id and i^- i^+ = id")
    shift = CheckResult("statistic-shift", "t_i(i_+ b) = t_i(b) + 1 and t*_i(i^+ b) = t*_i(b) + 1")
    inv_t = CheckResult("t-invariance", "t_j(i^+ b) = t_j(b) and t*_j(i_+ b) = t*_j(b) for j != i")
    commute = CheckResult("commutation", "i^+ j_+ b = j_+ i^+ b for i != j")
    strings = CheckResult("bi-string-commutation", "(j_+)^m (i^+)^n K = (i^+)^n (j_+)^m K when t_j(K) = t*_i(K) = 0")
    tformula = CheckResult("t-formula", "t_i((i^+)^c b0) for t*_i(b0) = 0 and its mirror")
    case_le = CheckResult("same-colour-commute", "c + (nu', i) <= d: i_+ (i^+)^c K0 = (i^+)^c i_+ K0, t*_i(i_- b) = c")
    case_gt = CheckResult("same-colour-collapse", "c + (nu', i) > d: i_- b = i^- b, t*_i(i_- b) = c - 1")

    def guarded(check, fn):
        try:
            fn()
        except CutoffExceeded:
            check.skipped += 1

    for v in verts:
        for i in I:
            for kind in KINDS:
                def _inv(kind=kind, i=i, v=v):
                    w = graph.up(kind, i, v)
                    inverse.instances += 1
                    if graph.down(kind, i, w) != v:
                        inverse.fail(vertex=v, color=i + 1, kind=kind)
                    shift.instances += 1
                    if graph.stat(kind, w)[i] != graph.stat(kind, v)[i] + 1:
                        shift.fail(vertex=v, color=i + 1, kind=kind)
                    for j in I:
                        if j == i:
                            continue
                        inv_t.instances += 1
                        other = LOWER if kind == UPPER else UPPER
                        if graph.stat(other, w)[j] != graph.stat(other, v)[j]:
                            inv_t.fail(vertex=v, color=i + 1, kind=kind, j=j + 1)

                guarded(inverse, _inv)

            for j in I:
                if j == i:
                    continue

                def _comm(i=i, j=j, v=v):
                    a = graph.up(UPPER, i, graph.up(LOWER, j, v))
                    b = graph.up(LOWER, j, graph.up(UPPER, i, v))
                    commute.instances += 1
                    if a != b:
                        commute.fail(vertex=v, i=i + 1, j=j + 1, left=a, right=b)

                guarded(commute, _comm)

                if graph.t(v)[j] == 0 and graph.t_star(v)[i] == 0:
                    room = graph.height_cutoff - sum(v[0])
                    for m in range(room + 1):
                        for n in range(room + 1 - m):
                            if m == 0 or n == 0:
                                continue

                            def _bi(i=i, j=j, v=v, m=m, n=n):
                                a = graph.up_power(LOWER, j, graph.up_power(UPPER, i, v, n), m)
                                b = graph.up_power(UPPER, i, graph.up_power(LOWER, j, v, m), n)
                                strings.instances += 1
                                if a != b:
                                    strings.fail(vertex=v, i=i + 1, j=j + 1, m=m, n=n)

                            guarded(strings, _bi)

    # same-colour rules, indexed by the string bottom b0
    for v0 in verts:
        nu0 = v0[0]
        room = graph.height_cutoff - sum(nu0)
        for i in I:
            pair = cartan.pairing_weights(datum, nu0, cartan.unit(datum.n, i))
            for kind in KINDS:
                other = UPPER if kind == LOWER else LOWER
                # kind == LOWER: b0 with t*_i = 0, walk up i^+ and read t_i; mirror otherwise
                if graph.stat(other, v0)[i] != 0:
                    continue
                d = graph.stat(kind, v0)[i]
                for c in range(1, room + 1):
                    try:
                        b = graph.up_power(other, i, v0, c)
                    except CutoffExceeded:
                        tformula.skipped += 1
                        break
                    tformula.instances += 1
                    expect = d if c + pair <= d else c + pair
                    if graph.stat(kind, b)[i] != expect:
                        tformula.fail(bottom=v0, color=i + 1, kind=kind, c=c, got=graph.stat(kind, b)[i], expected=expect)
                    if kind != LOWER or d == 0:
                        continue
                    if c + pair <= d:
                        k0 = graph.down(LOWER, i, v0)
                        case_le.instances += 1
                        if k0 is None or graph.t_star(k0)[i] != 0:
                            case_le.fail(bottom=v0, color=i + 1, c=c, reason="t*_i(i_- b0) != 0")
                            continue
                        try:
                            lhs = graph.up(LOWER, i, graph.up_power(UPPER, i, k0, c))
                        except CutoffExceeded:
                            case_le.skipped += 1
                            continue
                        rhs = graph.up_power(UPPER, i, graph.up(LOWER, i, k0), c)
                        if not (lhs == rhs == b):
                            case_le.fail(bottom=v0, color=i + 1, c=c, reason="i_+ and (i^+)^c do not commute")
                        below = graph.down(LOWER, i, b)
                        if below is None or graph.t_star(below)[i] != c:
                            case_le.fail(bottom=v0, color=i + 1, c=c, reason="t*_i(i_- b) != c")
                    else:
                        case_gt.instances += 1
                        lo = graph.down(LOWER, i, b)
                        hi = graph.down(UPPER, i, b)
                        if lo is None or lo != hi or lo != graph.up_power(UPPER, i, v0, c - 1):
                            case_gt.fail(bottom=v0, color=i + 1, c=c, reason="i_- b != i^- b")
                        elif graph.t_star(lo)[i] != c - 1:
                            case_gt.fail(bottom=v0, color=i + 1, c=c, reason="t*_i(i_- b) != c - 1")

    return LemmaReport([inverse, shift, inv_t, commute, strings, tformula, case_le, case_gt])


# -- export -------------------------------------------------------------------------------------

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f")


def graph_to_json(graph):
    verts = []
    for vid in sorted(graph.vertices, key=lambda v: (sum(v[0]), v)):
        b = graph.vertices[vid]
        verts.append(
            {
                "id": vertex_label(vid),
                "weight": list(vid[0]),
                "index": vid[1],
                "t": list(b.t),
                "t_star": list(b.t_star),
                "s_string": [[i + 1, m] for i, m in (b.s_string or ())],
            }
        )
    arrows = [
        {"source": vertex_label(a.source), "target": vertex_label(a.target), "color": a.color + 1, "kind": a.kind}
        for a in graph.arrows
    ]
    boundary = [
        {"source": vertex_label(vid), "color": i + 1, "kind": kind}
        for kind, i, vid in sorted(graph.boundary, key=lambda x: (sum(x[2][0]), x[2], x[1], x[0]))
    ]
    return {
        "datum": graph.datum.to_json(),
        "height_cutoff": graph.height_cutoff,
        "vertices": verts,
        "arrows": arrows,
        "boundary": boundary,
    }


def graph_to_dot(graph):
    lines = ["digraph crystal {", "  rankdir=BT;", '  node [shape=box, fontname="monospace"];']
    for vid in sorted(graph.vertices, key=lambda v: (sum(v[0]), v)):
        b = graph.vertices[vid]
        seq = cartan.format_sequence(b.s_string or ())
        label = f"{seq}\\n({','.join(str(c) for c in vid[0])})"
        lines.append(f'  "{vertex_label(vid)}" [label="{label}"];')
    for a in graph.arrows:
        style = "solid" if a.kind == LOWER else "dashed"
        mark = f"{a.color + 1}+" if a.kind == UPPER else f"{a.color + 1}_+"
        color = PALETTE[a.color % len(PALETTE)]
        lines.append(
            f'  "{vertex_label(a.source)}" -> "{vertex_label(a.target)}" [color="{color}", style={style}, label="{mark}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(graph, fmt):
    if fmt == "dot":
        return graph_to_dot(graph)
    if fmt == "json":
        return json.dumps(graph_to_json(graph), indent=2, sort_keys=True) + "\n"
    raise UnknownFormat(f"unknown graph format {fmt!r} (expected 'dot' or 'json')")
