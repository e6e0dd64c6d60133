"""Command-line frontend.

Exit status: 0 when every invariant checked by the command holds, 1 on an
invariant failure (a JSON failure report is written to ``failure.json`` and
stderr), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, cartan, oracles
from .cache import ENV_VAR, Cache, default_cache_dir
from .canonical import CanonicalError, InvariantViolation, NoSuchWeight
from .coeff import format_coeff, format_laurent
from .crystal import UnknownFormat, build_graph, export_graph, graph_to_json, vertex_label, verify_lemma_suite
from .engine import WeightOutOfRange
from .pipeline import build_store
from .reports import (
    BadBound,
    blambda_oracle,
    blambda_table,
    characterization_summary,
    check_bound,
    classical_limit_report,
    dims_table,
    ordered_vertices,
    transition_matrix,
)

log = logging.getLogger("uqcanon")

COMMANDS = ("dims", "canonical", "crystal", "verify", "transition", "blambda", "export")


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    cartan: str
    order: tuple | None
    max_height: int
    out: Path | None
    cache_dir: Path | None
    jobs: int
    seed: int
    weight: tuple | None = None
    bound: tuple | None = None
    fmt: str = "dot"
    require_positivity: bool = True
    figures: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.max_height < 0:
            raise ConfigError("--max-height must be >= 0")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")


def _int_list(text, what):
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise ConfigError(f"{what} must be comma-separated integers, got {text!r}") from exc


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cartan", required=True, help="preset name (A1, A2, A3, D4, A1-double-bond) or JSON file")
    common.add_argument("--order", help="vertex order, 1-based and comma-separated, smallest first")
    common.add_argument("--max-height", type=int, default=4)
    common.add_argument("--out", type=Path, help="output directory (export prints to stdout without it)")
    common.add_argument("--cache-dir", type=Path, help=f"cache directory (default: ${ENV_VAR}, else no cache)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes per height")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument(
        "--positivity",
        choices=("require", "report"),
        default="require",
        help="whether a certified non-positive element fails the run",
    )
    common.add_argument("--no-figures", action="store_true", help="skip the PNG figures")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="uqcanon", description="Canonical bases of U_q^+ and their crystal graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("dims", parents=[common], help="dimension table against partition counts")
    c = sub.add_parser("canonical", parents=[common], help="canonical bases with monomial expansions")
    c.add_argument("--weight", help="restrict output to one weight, e.g. 1,2")
    sub.add_parser("crystal", parents=[common], help="crystal graph and lemma suite")
    sub.add_parser("verify", parents=[common], help="every invariant suite")
    t = sub.add_parser("transition", parents=[common], help="monomial-to-canonical transition matrices")
    t.add_argument("--weight", help="restrict output to one weight")
    b = sub.add_parser("blambda", parents=[common], help="highest-weight quotient slices")
    b.add_argument("--bound", required=True, help="bound vector d, e.g. 2,2 (d_i = 1 - lambda(h_i))")
    e = sub.add_parser("export", parents=[common], help="graph as DOT or JSON")
    e.add_argument("--format", dest="fmt", default="dot", help="dot or json")
    return p


def config_from_args(ns):
    cache_dir = ns.cache_dir if ns.cache_dir is not None else default_cache_dir()
    return JobConfig(
        command=ns.command,
        cartan=ns.cartan,
        order=_int_list(ns.order, "--order") if ns.order else None,
        max_height=ns.max_height,
        out=ns.out,
        cache_dir=cache_dir,
        jobs=ns.jobs,
        seed=ns.seed,
        weight=_int_list(ns.weight, "--weight") if getattr(ns, "weight", None) else None,
        bound=_int_list(ns.bound, "--bound") if getattr(ns, "bound", None) else None,
        fmt=getattr(ns, "fmt", "dot"),
        require_positivity=ns.positivity == "require",
        figures=not ns.no_figures,
    )


# -- output helpers ----------------------------------------------------------------------


def _write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerows(rows)


def _wname(nu):
    return "-".join(str(c) for c in nu)


class Outputs:
    def __init__(self, root):
        self.root = Path(root)
        self.written = []

    def path(self, name):
        p = self.root / name
        p.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(p)
        return p

    def json(self, name, doc):
        _write_json(self.path(name), doc)

    def csv(self, name, rows):
        _write_csv(self.path(name), rows)


# -- commands ------------------------------------------------------------------------------


def _datum(cfg):
    if cfg.order is not None:
        n = None
        if cfg.cartan in cartan.PRESETS:
            n = len(cartan.PRESETS[cfg.cartan])
        if n is not None and len(cfg.order) != n:
            raise ConfigError(f"--order has {len(cfg.order)} entries, datum has {n} vertices")
    return cartan.load_cartan(cfg.cartan, cfg.order)


def _store(cfg, datum=None):
    datum = datum or _datum(cfg)
    cache = Cache(cfg.cache_dir) if cfg.cache_dir else None
    store = build_store(datum, cfg.max_height, cache=cache, jobs=cfg.jobs)
    if cache:
        log.info("cache: %d hits, %d misses, %d corrupt", cache.hits, cache.misses, cache.corrupt)
    return store


def _check_weight(store, nu):
    if len(nu) != store.datum.n or min(nu) < 0:
        raise ConfigError(f"--weight {nu} is not a weight of rank {store.datum.n}")
    if sum(nu) > store.max_height:
        raise ConfigError(f"--weight {nu} exceeds --max-height {store.max_height}")


def cmd_dims(cfg, out):
    store = _store(cfg)
    try:
        rows = dims_table(store)
    except oracles.NotFiniteType:
        rows = [(nu, store.engine.dim(nu), None) for nu in cartan.enumerate_weights(store.datum, store.max_height)]
    table = [["weight", "height", "dim", "kostant", "match"]]
    bad = []
    for nu, d, k in rows:
        table.append([_wname(nu), sum(nu), d, "" if k is None else k, "" if k is None else int(d == k)])
        if k is not None and d != k:
            bad.append({"weight": list(nu), "dim": d, "kostant": k})
    out.csv("dims.csv", table)
    doc = {
        "datum": store.datum.to_json(),
        "max_height": cfg.max_height,
        "weights": [{"weight": list(nu), "dim": d, "kostant": k} for nu, d, k in rows],
        "mismatches": bad,
        "passed": not bad,
    }
    out.json("dims.json", doc)
    if cfg.figures:
        from .figures import plot_dims

        plot_dims(rows, out.path("dims.png"), title=f"{store.datum.name or 'datum'}: dim by weight")
    for line in table:
        print("\t".join(str(x) for x in line))
    if bad:
        raise InvariantViolation("dimension differs from the partition count", {"mismatches": bad})


SEMICANONICAL_NOTE = (
    "numeric semicanonical data is not computed; the s-string and its order position "
    "index the corresponding semicanonical element"
)


def _vertex_doc(store, b, position=None):
    sp = store.engine.space(b.weight)
    doc = {
        "id": vertex_label(b.id),
        "order_position": position,
        "weight": list(b.weight),
        "t": list(b.t),
        "t_star": list(b.t_star),
        "s_string": None if b.s_string is None else [[i + 1, m] for i, m in b.s_string],
        "expansion_method": b.expansion_method,
        "pivot_coordinates": [
            {"monomial": cartan.format_sequence(m.seq), "coefficient": format_coeff(c)}
            for m, c in zip(sp.pivot_monomials, b.coords)
            if c
        ],
    }
    if b.monomial_expansion is not None:
        exp = sorted(b.monomial_expansion.items(), key=lambda mc: cartan.sequence_key(store.datum, mc[0].seq))
        doc["expansion"] = [{"monomial": cartan.format_sequence(m.seq), "coefficient": format_laurent(c)} for m, c in exp]
    else:
        doc["expansion"] = None
    if b.positivity_certificate is not None:
        t, y = b.positivity_certificate
        doc["non_positivity_certificate"] = {
            "v": str(t),
            "functional": [str(a) for a in y],
            "basis": [cartan.format_sequence(m.seq) for m in sp.pivot_monomials],
        }
    return doc


def cmd_canonical(cfg, out):
    store = _store(cfg)
    graph = build_graph(store)  # assigns s-strings
    weights = store.weights()
    if cfg.weight is not None:
        _check_weight(store, cfg.weight)
        weights = [cfg.weight]
    summ = characterization_summary(store)
    doc = {
        "datum": store.datum.to_json(),
        "max_height": cfg.max_height,
        "weights": [],
        "characterization": summ.to_json(),
        "semicanonical": SEMICANONICAL_NOTE,
    }
    for nu in weights:
        pos = {b.id: k for k, b in enumerate(ordered_vertices(graph, nu))}
        doc["weights"].append({"weight": list(nu), "elements": [_vertex_doc(store, b, pos[b.id]) for b in store.basis(nu)]})
    out.json("canonical.json", doc)
    for nu in weights:
        for b in store.basis(nu):
            exp = b.monomial_expansion
            text = (
                " + ".join(f"({format_laurent(c)})*{cartan.format_sequence(m.seq)}" for m, c in sorted(exp.items()))
                if exp
                else "no positive monomial expansion"
            )
            print(f"{vertex_label(b.id)}\t{text}")
    ok = summ.passed if cfg.require_positivity else summ.passed_without_positivity
    if not ok:
        raise InvariantViolation("canonical characterization failed", summ.to_json())


def cmd_crystal(cfg, out):
    store = _store(cfg)
    graph = build_graph(store)
    rep = verify_lemma_suite(graph)
    out.json("graph.json", graph_to_json(graph))
    out.path("graph.dot").write_text(export_graph(graph, "dot"))
    out.json("lemma_suite.json", rep.to_json())
    if cfg.figures:
        from .figures import plot_crystal

        plot_crystal(graph, out.path("crystal.png"), title=f"{store.datum.name or 'datum'} crystal graph")
    for line in rep.lines():
        print(line)
    if not rep.passed:
        raise InvariantViolation("lemma suite failed", rep.to_json())


def cmd_verify(cfg, out):
    from .verification import run_verify

    datum = _datum(cfg)
    store = _store(cfg, datum)
    second = None
    if datum.n > 1:
        second = _store(cfg, datum.with_order(tuple(reversed(datum.order))))
    passed, rep = run_verify(store, second, seed=cfg.seed, require_positivity=cfg.require_positivity)
    out.json("verify.json", rep)
    for name, sec in rep["sections"].items():
        state = "skipped" if sec.get("skipped") else ("PASS" if sec["passed"] else "FAIL")
        print(f"{name:<22} {state}")
    print("verify:", "PASS" if passed else "FAIL")
    if not passed:
        failed = {k: v for k, v in rep["sections"].items() if not v["passed"]}
        raise InvariantViolation("verification failed", failed)


def cmd_transition(cfg, out):
    store = _store(cfg)
    graph = build_graph(store)
    weights = store.weights()
    if cfg.weight is not None:
        _check_weight(store, cfg.weight)
        weights = [cfg.weight]
    reports, limits, failures = [], [], []
    for nu in weights:
        rep = transition_matrix(graph, nu, strict=False)
        reports.append(rep)
        out.csv(f"transition/{_wname(nu)}.csv", rep.to_rows())
        if rep.ok:
            limits.append(classical_limit_report(graph, nu))
        else:
            limits.append(None)
            failures.extend({"weight": list(nu), **f} for f in rep.failures)
    docs = []
    for rep, lim in zip(reports, limits):
        d = rep.to_json()
        d["classical_limit"] = lim
        d["order_positions"] = list(range(len(rep.ids)))
        docs.append(d)
    out.json(
        "transition.json",
        {"datum": store.datum.to_json(), "max_height": cfg.max_height, "matrices": docs, "semicanonical": SEMICANONICAL_NOTE},
    )
    if cfg.figures:
        from .figures import plot_transitions

        shown = [(r, m) for r, m in zip(reports, limits) if m is not None and len(m) > 1]
        shown = sorted(shown, key=lambda rm: (-len(rm[1]), sum(rm[0].weight), rm[0].weight))[:9]
        shown.sort(key=lambda rm: (sum(rm[0].weight), rm[0].weight))
        plot_transitions([r for r, _ in shown], [m for _, m in shown], out.path("transitions.png"))
    for rep in reports:
        print(f"{_wname(rep.weight)}\tsize={len(rep.ids)}\t{'ok' if rep.ok else 'FAIL'}")
    if failures:
        raise InvariantViolation("transition matrix not unitriangular and positive", {"failures": failures})


def cmd_blambda(cfg, out):
    store = _store(cfg)
    d = check_bound(store.datum, cfg.bound)
    table, closed = blambda_table(store, d)
    oracle = None
    mismatches = []
    if store.datum.is_finite_type():
        oracle = blambda_oracle(store.datum, d)
        for nu, s in table.items():
            if s.dimension != oracle.get(nu, 0):
                mismatches.append({"weight": list(nu), "slice": s.dimension, "freudenthal": oracle.get(nu, 0)})
    total = sum(s.dimension for s in table.values())
    doc = {
        "datum": store.datum.to_json(),
        "bound": list(d),
        "max_height": cfg.max_height,
        "slices": [s.to_json() for nu, s in table.items() if s.dimension],
        "total_dimension": total,
        "complete": closed,
        "oracle_total": None if oracle is None else sum(oracle.values()),
        "mismatches": mismatches,
    }
    out.json("blambda.json", doc)
    rows = [["weight", "dimension", "freudenthal"]]
    for nu, s in table.items():
        if s.dimension or (oracle and oracle.get(nu)):
            rows.append([_wname(nu), s.dimension, "" if oracle is None else oracle.get(nu, 0)])
    out.csv("blambda.csv", rows)
    if cfg.figures:
        from .figures import plot_blambda

        plot_blambda(table, oracle, out.path("blambda.png"), title=f"bound d = {','.join(map(str, d))}")
    print(f"total dimension {total}" + ("" if closed else f" (truncated at height {cfg.max_height})"))
    if oracle is not None:
        print(f"Freudenthal total {sum(oracle.values())}")
    if mismatches:
        raise InvariantViolation("slice dimensions differ from weight multiplicities", {"mismatches": mismatches})


def cmd_export(cfg, out):
    if cfg.fmt not in ("dot", "json"):
        raise UnknownFormat(f"unknown graph format {cfg.fmt!r} (expected 'dot' or 'json')")
    store = _store(cfg)
    graph = build_graph(store)
    text = export_graph(graph, cfg.fmt)
    if out is not None:
        out.path(f"graph.{cfg.fmt}").write_text(text)
    sys.stdout.write(text)


HANDLERS = {
    "dims": cmd_dims,
    "canonical": cmd_canonical,
    "crystal": cmd_crystal,
    "verify": cmd_verify,
    "transition": cmd_transition,
    "blambda": cmd_blambda,
    "export": cmd_export,
}

CONFIG_ERRORS = (ConfigError, cartan.CartanError, cartan.LengthMismatch, BadBound, UnknownFormat, NoSuchWeight, WeightOutOfRange)


def _failure_doc(cfg, exc):
    return {"command": cfg.command, "error": type(exc).__name__, "message": str(exc), "detail": getattr(exc, "detail", None)}


def run(cfg):
    """Execute ``cfg``; returns the exit status."""
    if cfg.out is None and cfg.command != "export":
        cfg.out = Path("uqcanon-out")
    out = Outputs(cfg.out) if cfg.out is not None else None
    try:
        HANDLERS[cfg.command](cfg, out)
    except CONFIG_ERRORS as exc:
        print(f"uqcanon: configuration error: {exc}", file=sys.stderr)
        return 2
    except (InvariantViolation, CanonicalError) as exc:
        doc = _failure_doc(cfg, exc)
        if out is not None:
            out.json("failure.json", doc)
        print(json.dumps(doc, indent=2, sort_keys=True, default=str), file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(ns.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
    except ConfigError as exc:
        print(f"uqcanon: configuration error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


__all__ = ["JobConfig", "build_parser", "main", "run"]
