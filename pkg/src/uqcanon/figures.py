"""Matplotlib figures written next to the CSV/JSON artifacts.

Everything renders with the Agg backend and a fixed metadata block so that
repeated runs produce the same PNG bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import cartan  # noqa: E402
from .crystal import LOWER, PALETTE  # noqa: E402

_META = {"Software": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_META)
    plt.close(fig)
    return path


def _wlabel(nu):
    return "".join(str(c) for c in nu) if all(c < 10 for c in nu) else ",".join(map(str, nu))


def plot_dims(rows, path, title=""):
    """Bars of weight-space dimensions with the partition-count oracle overlaid."""
    labels = [_wlabel(nu) for nu, _, _ in rows]
    dims = [d for _, d, _ in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.22 * len(rows)), 3.6))
    xs = range(len(rows))
    ax.bar(xs, dims, color="#4c72b0", label="dim")
    oracle = [(x, k) for x, (_, _, k) in zip(xs, rows) if k is not None]
    if oracle:
        ax.plot([x for x, _ in oracle], [k for _, k in oracle], "o", ms=3.5, color="#dd8452", label="Kostant count")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_ylabel("dimension")
    ax.set_title(title or "weight-space dimensions")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_transitions(reports, matrices, path, title=""):
    """Heatmaps of classical-limit transition matrices, one panel per weight."""
    n = len(matrices)
    if n == 0:
        fig, ax = plt.subplots(figsize=(3, 2))
        ax.text(0.5, 0.5, "no matrices", ha="center", va="center")
        ax.axis("off")
        return _save(fig, path)
    cols = min(n, 3)
    rows = (n + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(3.4 * cols, 3.2 * rows), squeeze=False)
    for ax in axes.flat[n:]:
        ax.axis("off")
    for ax, rep, mat in zip(axes.flat, reports, matrices):
        ax.imshow(mat, cmap="Blues", vmin=0)
        k = len(mat)
        for r in range(k):
            for c in range(k):
                if mat[r][c]:
                    ax.text(c, r, str(mat[r][c]), ha="center", va="center", fontsize=7)
        ax.set_title(f"weight {_wlabel(rep.weight)}", fontsize=9)
        ax.set_xticks([])
        ax.set_yticks([])
    fig.suptitle(title or "transition matrices at v = 1")
    return _save(fig, path)


def plot_blambda(table, oracle, path, title=""):
    """Slice dimensions per weight against the Freudenthal multiplicities."""
    weights = [nu for nu, s in table.items() if s.dimension or (oracle and oracle.get(nu))]
    weights.sort(key=lambda w: (sum(w), w))
    fig, ax = plt.subplots(figsize=(max(4, 0.4 * len(weights)), 3.2))
    xs = range(len(weights))
    ax.bar(xs, [table[nu].dimension for nu in weights], color="#55a868", label="slice")
    if oracle is not None:
        ax.plot(list(xs), [oracle.get(nu, 0) for nu in weights], "o", color="#c44e52", ms=4, label="Freudenthal")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([_wlabel(nu) for nu in weights], rotation=90, fontsize=7)
    ax.set_ylabel("dimension")
    ax.set_title(title or "highest-weight slice")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_crystal(graph, path, title="", max_vertices=400):
    """Layered drawing: height on the vertical axis, lower_plus arrows solid, upper_plus dashed."""
    layers = {}
    for vid in sorted(graph.vertices, key=lambda v: (sum(v[0]), v)):
        layers.setdefault(sum(vid[0]), []).append(vid)
    if len(graph.vertices) > max_vertices:
        keep = set()
        for h in sorted(layers):
            if len(keep) + len(layers[h]) > max_vertices:
                break
            keep.update(layers[h])
        layers = {h: vs for h, vs in layers.items() if set(vs) <= keep}
    else:
        keep = set(graph.vertices)
    pos = {}
    for h, vs in layers.items():
        k = len(vs)
        for j, vid in enumerate(vs):
            pos[vid] = (j - (k - 1) / 2, h)
    width = max((len(vs) for vs in layers.values()), default=1)
    fig, ax = plt.subplots(figsize=(min(16, 1.5 + 0.5 * width), 1.2 + 0.9 * len(layers)))
    for a in graph.arrows:
        if a.source not in keep or a.target not in keep:
            continue
        (x0, y0), (x1, y1) = pos[a.source], pos[a.target]
        ax.annotate(
            "",
            xy=(x1, y1),
            xytext=(x0, y0),
            arrowprops={
                "arrowstyle": "->",
                "color": PALETTE[a.color % len(PALETTE)],
                "linestyle": "solid" if a.kind == LOWER else "dashed",
                "lw": 0.8,
                "alpha": 0.8,
                "shrinkA": 4,
                "shrinkB": 4,
            },
        )
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    ax.scatter(xs, ys, s=14, color="black", zorder=3)
    if len(pos) <= 40:
        for vid, (x, y) in pos.items():
            s = graph.vertices[vid].s_string
            ax.text(x, y + 0.12, cartan.format_sequence(s or ()), ha="center", fontsize=5)
    ax.set_ylabel("height")
    ax.set_xticks([])
    ax.set_title(title or "crystal graph")
    return _save(fig, path)
