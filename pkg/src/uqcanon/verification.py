"""The full invariant run behind ``uqcanon verify``.

Each section is a plain dict with a ``passed`` flag so the whole report can
be written as JSON.  Sections whose oracle does not apply to the datum are
marked ``"skipped"`` and do not affect the verdict.
"""

from __future__ import annotations

import logging
import random
import time

from . import cartan, oracles
from .canonical import NotInLattice, SIDES
from .coeff import RationalCoeff, vpow
from .crystal import (
    assign_s_strings,
    build_graph,
    connectivity,
    graph_signature,
    vertex_label,
    verify_lemma_suite,
)
from .identities import check_operator_identities
from .reports import characterization_summary, transition_matrix

log = logging.getLogger(__name__)


def dimension_section(store):
    datum = store.datum
    try:
        kostant = oracles.kostant_table(datum, store.max_height)
    except oracles.NotFiniteType as exc:
        return {"passed": True, "skipped": str(exc), "weights": 0}
    bad = []
    for nu in cartan.enumerate_weights(datum, store.max_height):
        d = store.engine.dim(nu)
        if d != kostant[nu]:
            bad.append({"weight": list(nu), "dim": d, "kostant": kostant[nu]})
    return {"passed": not bad, "weights": len(kostant), "mismatches": bad}


def identity_section(store):
    rep = check_operator_identities(store.engine)
    return rep.to_json()


def characterization_section(store, require_positivity=True):
    summ = characterization_summary(store)
    doc = summ.to_json()
    doc["positivity_required"] = require_positivity
    doc["passed"] = summ.passed if require_positivity else summ.passed_without_positivity
    return doc


def lemma_section(graph):
    return verify_lemma_suite(graph).to_json()


def structure_section(graph, second=None):
    store = graph.store
    bad_counts = []
    per_weight = graph.by_weight()
    for nu in store.weights():
        got = len(per_weight.get(nu, ()))
        if got != store.engine.dim(nu):
            bad_counts.append({"weight": list(nu), "vertices": got, "dim": store.engine.dim(nu)})
    reached, heights = connectivity(graph)
    try:
        assign_s_strings(graph)
        injective, why = True, None
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        injective, why = False, str(exc)
    doc = {
        "vertices": len(graph.vertices),
        "arrows": len(graph.arrows),
        "count_mismatches": bad_counts,
        "connected": reached,
        "path_lengths_equal_height": heights,
        "s_string_injective": injective,
    }
    if why:
        doc["s_string_error"] = why
    ok = not bad_counts and reached and heights and injective
    if second is not None:
        same = graph_signature(graph) == graph_signature(second)
        doc["second_order"] = [i + 1 for i in second.datum.order]
        doc["order_independent"] = same
        ok = ok and same
    doc["passed"] = ok
    return doc


def transition_section(graph):
    failures, weights = [], 0
    for nu in graph.store.weights():
        rep = transition_matrix(graph, nu, strict=False)
        weights += 1
        for f in rep.failures:
            failures.append({"weight": list(nu), **f})
    return {"passed": not failures, "weights": weights, "failures": failures[:50]}


def crystal_cross_section(graph):
    """Statistics and string transport recomputed by iterating the crystal operators."""
    store = graph.store
    stat_bad, transport_bad, n_stat, n_transport = [], [], 0, 0
    top = store.max_height
    for b in store.vertices():
        n_stat += 1
        t, ts = store.t_statistics(b)
        if (t, ts) != (b.t, b.t_star):
            stat_bad.append({"id": vertex_label(b.id), "recorded": [list(b.t), list(b.t_star)], "recomputed": [list(t), list(ts)]})
        for side in SIDES:
            for i in store.datum.vertices:
                if b.stat(side)[i] != 0:
                    continue
                for n in range(1, top - sum(b.weight) + 1):
                    n_transport += 1
                    via_ops = store.pi_transport(i, n, b, side)
                    recorded = store.transported(side, i, n, b)
                    if via_ops is None or via_ops.id != recorded.id:
                        transport_bad.append(
                            {"side": side, "i": i + 1, "n": n, "bottom": vertex_label(b.id), "recorded": vertex_label(recorded.id)}
                        )
    return {
        "passed": not stat_bad and not transport_bad,
        "statistics_checked": n_stat,
        "transports_checked": n_transport,
        "statistic_failures": stat_bad[:50],
        "transport_failures": transport_bad[:50],
    }


def lattice_section(store, seed, samples=200):
    """Random ``Z[v^-1]`` combinations of canonical elements reduce to their constant terms."""
    rng = random.Random(seed)
    weights = [nu for nu in store.weights() if store.engine.dim(nu) > 0]
    bad = []
    for _ in range(samples):
        nu = rng.choice(weights)
        wb = store.basis(nu)
        want, acc = [], store.engine.zero(nu)
        for b in wb:
            const = rng.randint(-3, 3)
            tail = [rng.randint(-3, 3) for _ in range(rng.randint(0, 3))]
            c = RationalCoeff.of(const)
            for k, a in enumerate(tail, start=1):
                c = c + RationalCoeff.of(vpow(-k)) * a
            want.append(const)
            acc = acc + b.element.scale(c)
        try:
            got = list(wb.reduce(acc))
        except NotInLattice as exc:
            bad.append({"weight": list(nu), "error": str(exc)})
            continue
        if got != want:
            bad.append({"weight": list(nu), "expected": want, "reduced": got})
        if any(want):
            try:
                wb.reduce(acc.scale(RationalCoeff.of(vpow(1))))
                bad.append({"weight": list(nu), "error": "v * x accepted into the lattice"})
            except NotInLattice:
                pass
    return {"passed": not bad, "seed": seed, "samples": samples, "failures": bad[:50]}


def run_verify(store, second_store=None, seed=0, require_positivity=True, cross_checks=True):
    """All suites; returns ``(passed, report)``.

    Timings go to the log only, so the report is byte-stable across runs.
    """
    timings = {}

    def timed(name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        timings[name] = round(time.perf_counter() - t0, 3)
        log.info("%s: %s (%.2fs)", name, "pass" if out.get("passed") else "FAIL", timings[name])
        return out

    graph = build_graph(store)
    second = build_graph(second_store) if second_store is not None else None
    sections = {
        "dimensions": timed("dimensions", dimension_section, store),
        "operator_identities": timed("operator_identities", identity_section, store),
        "characterization": timed("characterization", characterization_section, store, require_positivity),
        "lemma_suite": timed("lemma_suite", lemma_section, graph),
        "graph_structure": timed("graph_structure", structure_section, graph, second),
        "transition_matrices": timed("transition_matrices", transition_section, graph),
        "lattice": timed("lattice", lattice_section, store, seed),
    }
    if cross_checks:
        sections["crystal_operators"] = timed("crystal_operators", crystal_cross_section, graph)
    passed = all(s["passed"] for s in sections.values())
    report = {
        "datum": store.datum.to_json(),
        "max_height": store.max_height,
        "passed": passed,
        "sections": sections,
    }
    return passed, report


__all__ = ["run_verify"]
