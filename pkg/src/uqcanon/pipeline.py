"""Height-by-height driver: weight spaces, then canonical bases, with optional
cache and a process pool per height.

Weights of one height only depend on lower heights, so each height is one
parallel round.  Workers are forked after the lower heights are in memory
and return pickled results; the parent owns the cache.
"""

from __future__ import annotations

import logging
import multiprocessing as mp

from . import cartan
from .cache import Cache, entry_key
from .canonical import CanonicalStore, compute_canonical
from .engine import UPlusEngine, build_weight_space
from .serialize import basis_from_doc, basis_to_doc, model_from_doc, model_to_doc

log = logging.getLogger(__name__)

_STORE = None  # set in the parent right before forking


def _lower_spaces(engine, nu):
    lower = {}
    for i in engine.datum.vertices:
        for k in range(1, nu[i] + 1):
            mu = cartan.shifted(nu, i, -k)
            lower[mu] = engine.spaces[mu]
    return lower


def _lower_bases(store, nu):
    lower = {}
    for i in store.datum.vertices:
        for k in range(1, nu[i] + 1):
            mu = cartan.shifted(nu, i, -k)
            lower[mu] = store.bases[mu]
    return lower


def _space_job(nu):
    eng = _STORE.engine
    return nu, build_weight_space(eng.datum, nu, _lower_spaces(eng, nu))


def _basis_job(nu):
    store = _STORE
    wb = compute_canonical(store.engine, nu, _lower_bases(store, nu))
    if store.positivity:
        from .positivity import attach_expansions

        store.bases[nu] = wb
        attach_expansions(store, wb)
    return nu, wb


def _run(jobs, fn, items):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = mp.get_context("fork")
    with ctx.Pool(min(jobs, len(items))) as pool:
        return pool.map(fn, items)


def build_store(datum, max_height, cache=None, jobs=1, positivity=True):
    """A fully built :class:`CanonicalStore` for every weight up to ``max_height``."""
    global _STORE
    if cache is not None and not isinstance(cache, Cache):
        cache = Cache(cache)
    store = CanonicalStore(UPlusEngine(datum, max_height), positivity=positivity)
    engine = store.engine
    extra = {"positivity": bool(positivity)}
    for h in range(max_height + 1):
        layer = cartan.weights_of_height(datum.n, h)
        todo = []
        for nu in layer:
            doc = cache.get(entry_key(datum, "space", nu)) if cache else None
            if doc is not None:
                try:
                    engine.spaces[nu] = model_from_doc(datum, doc)
                    continue
                except (KeyError, ValueError, TypeError, IndexError) as exc:
                    log.warning("discarding cached weight space %s: %s", nu, exc)
            todo.append(nu)
        _STORE = store
        try:
            for nu, model in _run(jobs, _space_job, todo):
                engine.spaces[nu] = model
                if cache:
                    cache.put(entry_key(datum, "space", nu), model_to_doc(model))
        finally:
            _STORE = None

        todo = []
        for nu in layer:
            doc = cache.get(entry_key(datum, "canonical", nu, extra)) if cache else None
            if doc is not None:
                try:
                    store.bases[nu] = basis_from_doc(doc)
                    continue
                except (KeyError, ValueError, TypeError, IndexError) as exc:
                    log.warning("discarding cached basis %s: %s", nu, exc)
            todo.append(nu)
        _STORE = store
        try:
            for nu, wb in _run(jobs, _basis_job, todo):
                store.bases[nu] = wb
                if cache:
                    cache.put(entry_key(datum, "canonical", nu, extra), basis_to_doc(wb))
        finally:
            _STORE = None
    return store
