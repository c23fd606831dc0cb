"""Render benchmark summaries to PNG figures.

Figures are a convenience view over the CSV/JSON artifacts; the delimited
output remains the canonical record. Rendering is deterministic: fixed
figure geometry, fixed dpi, and pinned PNG metadata.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

TOPO_COLORS = {
    "designed": "#1b7837",
    "triangular": "#d95f02",
    "cross_square": "#7570b3",
    "square": "#666666",
}

_SAVE_KW = {"dpi": 110, "metadata": {"Software": "planarq"}}


def _color(topo: str) -> str:
    return TOPO_COLORS.get(topo, "#333333")


def render_report(summary: dict, out_dir: str) -> list[str]:
    """Write the figures for one suite summary; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = [
        _render_histogram(summary, out_dir),
        _render_depth_curves(summary, out_dir),
        _render_qubit_curves(summary, out_dir),
    ]
    return [p for p in paths if p is not None]


def _render_histogram(summary: dict, out_dir: str) -> str | None:
    hist = summary.get("histogram")
    if not hist or not hist.get("counts"):
        return None
    edges = hist["edges"]
    centers = [(edges[i] + edges[i + 1]) / 2 for i in range(len(edges) - 1)]
    width = edges[1] - edges[0]
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for topo, counts in sorted(hist["counts"].items()):
        ax.step(centers, counts, where="mid", label=topo, color=_color(topo))
    ax.set_xlabel("g_ap = g_add / g_ori")
    ax.set_ylabel("records")
    ax.set_title(f"added-gate ratio distribution (bin width {width:.3f})")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(out_dir, "gap_hist.png")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def _iter_cells(summary: dict):
    for key, entry in summary.get("cells", {}).items():
        topo, ns, ds = key.split("|")
        yield topo, int(ns[1:]), int(ds[1:]), entry


def _render_depth_curves(summary: dict, out_dir: str) -> str | None:
    cfg = summary.get("config", {})
    qubit_counts = cfg.get("qubit_counts", [])
    depths = sorted(cfg.get("depths", []))
    if not qubit_counts or len(depths) < 2:
        return None
    cells = {(t, n, d): e for t, n, d, e in _iter_cells(summary)}
    ncols = min(len(qubit_counts), 2)
    nrows = (len(qubit_counts) + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.2 * ncols, 3.6 * nrows), squeeze=False
    )
    for idx, n in enumerate(sorted(qubit_counts)):
        ax = axes[idx // ncols][idx % ncols]
        for topo in sorted(cfg.get("topologies", [])):
            pts = [(d, cells[(topo, n, d)]) for d in depths if (topo, n, d) in cells]
            if not pts:
                continue
            xs = [p[0] for p in pts]
            ys = [p[1]["mean"] for p in pts]
            if all("ci_lo" in p[1] for p in pts):
                lo = [p[1]["mean"] - p[1]["ci_lo"] for p in pts]
                hi = [p[1]["ci_hi"] - p[1]["mean"] for p in pts]
                ax.errorbar(xs, ys, yerr=[lo, hi], label=topo, color=_color(topo),
                            marker="o", markersize=3, capsize=2)
            else:
                ax.plot(xs, ys, label=topo, color=_color(topo), marker="o",
                        markersize=3)
        verdicts = summary.get("depth_trends", {})
        tag = verdicts.get(f"designed|n{n}", {}).get("verdict")
        title = f"{n} qubits" + (f" (designed trend: {tag})" if tag else "")
        ax.set_title(title, fontsize=10)
        ax.set_xlabel("depth")
        ax.set_ylabel("mean g_ap")
        if idx == 0:
            ax.legend(fontsize=8)
    for idx in range(len(qubit_counts), nrows * ncols):
        axes[idx // ncols][idx % ncols].axis("off")
    fig.tight_layout()
    path = os.path.join(out_dir, "gap_vs_depth.png")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def _render_qubit_curves(summary: dict, out_dir: str) -> str | None:
    cfg = summary.get("config", {})
    qubit_counts = sorted(cfg.get("qubit_counts", []))
    depths = sorted(cfg.get("depths", []))
    if len(qubit_counts) < 2 or not depths:
        return None
    cells = {(t, n, d): e for t, n, d, e in _iter_cells(summary)}
    slopes = summary.get("qubit_slopes", {})
    fig, ax = plt.subplots(figsize=(7, 4.2))
    d = depths[-1]
    for topo in sorted(cfg.get("topologies", [])):
        pts = [(n, cells[(topo, n, d)]["mean"]) for n in qubit_counts
               if (topo, n, d) in cells]
        if not pts:
            continue
        label = topo
        slope = slopes.get(f"{topo}|d{d}")
        if slope is not None:
            label = f"{topo} (slope {slope:.2e})"
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label,
                color=_color(topo), marker="s", markersize=4)
    ax.set_xlabel("qubits")
    ax.set_ylabel("mean g_ap")
    ax.set_title(f"scaling at depth {d}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out_dir, "gap_vs_qubits.png")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path
