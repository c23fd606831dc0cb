"""Benchmark suite: route seeded random circuits over designed and lattice
topologies, then aggregate added-gate ratios into trend statistics.

Every record derives from explicit seeds, so a rerun of the same config
reproduces the same circuits, designs, routes, and aggregates. Wall-clock
columns are the one exception; they can be zeroed for byte-stable output.
"""
from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field

from .circuit import Circuit, RandomCircuitSpec, generate_random_circuit
from .design import design
from .graph import CouplingGraph
from .lattices import LATTICE_KINDS, lattice, planar_exempt
from .routing import route

log = logging.getLogger(__name__)

Z_BY_LEVEL = {0.90: 1.645, 0.95: 1.96, 0.99: 2.576}


# ---------------------------------------------------------------------------
# trend statistics


@dataclass(frozen=True)
class TrendResult:
    s: int
    var_s: float
    z: float
    verdict: str


def mann_kendall(series) -> TrendResult:
    """Mann-Kendall trend test with the standard tie correction.

    S counts concordant minus discordant pairs; the verdict calls the
    trend at the 5% two-sided level (|z| > 1.96).
    """
    xs = list(series)
    n = len(xs)
    if n < 4:
        raise ValueError("need at least 4 points for a trend call")
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            if xs[j] > xs[i]:
                s += 1
            elif xs[j] < xs[i]:
                s -= 1
    var = n * (n - 1) * (2 * n + 5)
    counts: dict[float, int] = {}
    for x in xs:
        counts[x] = counts.get(x, 0) + 1
    for t in counts.values():
        if t > 1:
            var -= t * (t - 1) * (2 * t + 5)
    var /= 18.0
    if s > 0:
        z = (s - 1) / math.sqrt(var) if var > 0 else 0.0
    elif s < 0:
        z = (s + 1) / math.sqrt(var) if var > 0 else 0.0
    else:
        z = 0.0
    if z > 1.96:
        verdict = "increasing"
    elif z < -1.96:
        verdict = "decreasing"
    else:
        verdict = "no_trend"
    return TrendResult(s=s, var_s=var, z=z, verdict=verdict)


def confidence_interval(samples, level: float = 0.95) -> tuple[float, float, float]:
    """Normal-approximation interval: (mean, lo, hi)."""
    xs = list(samples)
    n = len(xs)
    if n < 2:
        raise ValueError("need at least 2 samples")
    if level not in Z_BY_LEVEL:
        raise ValueError(f"unsupported level {level}; pick one of {sorted(Z_BY_LEVEL)}")
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    half = Z_BY_LEVEL[level] * math.sqrt(var) / math.sqrt(n)
    return mean, mean - half, mean + half


def linreg_slope(xs, ys) -> float:
    """Ordinary least squares slope of ys on xs."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need matching xs/ys with at least 2 points")
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    den = sum((x - mx) ** 2 for x in xs)
    if den == 0:
        raise ValueError("xs are degenerate")
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / den


# ---------------------------------------------------------------------------
# seed schedule

_M64 = (1 << 64) - 1


def _splitmix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, n_qubits: int, depth: int, sample: int) -> int:
    """Deterministic per-task seed; avalanche mixing keeps tasks decorrelated."""
    h = _splitmix(base_seed & _M64)
    for part in (n_qubits, depth, sample):
        h = _splitmix(h ^ (part & _M64))
    return h & 0x7FFFFFFF


# ---------------------------------------------------------------------------
# suite


@dataclass(frozen=True)
class SuiteConfig:
    qubit_counts: tuple[int, ...] = (16, 24, 32, 48)
    depths: tuple[int, ...] = (50, 100, 200, 400)
    samples: int = 20
    density: float = 0.8
    alpha: float = 0.5
    base_seed: int = 0
    topologies: tuple[str, ...] = ("designed",) + LATTICE_KINDS
    include_timings: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")
        for t in self.topologies:
            if t != "designed" and t not in LATTICE_KINDS:
                raise ValueError(f"unknown topology {t!r}")


def desk_config(**overrides) -> SuiteConfig:
    """Grid used for the directional comparison claims."""
    return SuiteConfig(**overrides)


def smoke_config(**overrides) -> SuiteConfig:
    params = dict(qubit_counts=(8, 12), depths=(10, 20), samples=2)
    params.update(overrides)
    return SuiteConfig(**params)


CSV_HEADER = "circuit_id,n_qubits,depth,topology,seed,g_ori,g_add,g_ap,design_ms,route_ms"


@dataclass(frozen=True)
class SuiteResult:
    config: SuiteConfig
    records: tuple[dict, ...]
    summary: dict = field(compare=False)

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        for r in self.records:
            lines.append(
                f"{r['circuit_id']},{r['n_qubits']},{r['depth']},{r['topology']},"
                f"{r['seed']},{r['g_ori']},{r['g_add']},{r['g_ap']:.6f},"
                f"{r['design_ms']:.6f},{r['route_ms']:.6f}"
            )
        return "\n".join(lines) + "\n"

    def summary_json(self) -> str:
        return json.dumps(self.summary, sort_keys=True, indent=2) + "\n"


def run_suite(config: SuiteConfig) -> SuiteResult:
    """Design, route, and score every (qubits, depth, sample, topology) task."""
    records: list[dict] = []
    lattice_cache: dict[tuple[str, int], CouplingGraph] = {}
    for n in config.qubit_counts:
        for d in config.depths:
            for sample in range(config.samples):
                seed = derive_seed(config.base_seed, n, d, sample)
                spec = RandomCircuitSpec(n, d, config.density, seed)
                circ = generate_random_circuit(spec)
                cid = f"rand_q{n}_d{d}_s{sample}"
                try:
                    records.extend(
                        _run_tasks(circ, cid, n, d, seed, config, lattice_cache)
                    )
                except Exception:
                    log.exception("task %s failed; continuing", cid)
    summary = summarize(records, config)
    return SuiteResult(config=config, records=tuple(records), summary=summary)


def _run_tasks(
    circ: Circuit,
    cid: str,
    n: int,
    d: int,
    seed: int,
    config: SuiteConfig,
    lattice_cache: dict,
) -> list[dict]:
    rows = []
    for topo in config.topologies:
        design_ms = 0.0
        if topo == "designed":
            t0 = time.perf_counter()
            res = design(circ, alpha=config.alpha)
            design_ms = (time.perf_counter() - t0) * 1000.0
            pcg = res.pcg
            init = tuple(res.placement[q] for q in range(n))
        else:
            key = (topo, n)
            if key not in lattice_cache:
                lattice_cache[key] = lattice(topo, n)
            pcg = lattice_cache[key]
            init = None
        t0 = time.perf_counter()
        routed = route(circ, pcg, init, seed=seed)
        route_ms = (time.perf_counter() - t0) * 1000.0
        if not config.include_timings:
            design_ms = 0.0
            route_ms = 0.0
        rows.append({
            "circuit_id": cid,
            "n_qubits": n,
            "depth": d,
            "topology": topo,
            "seed": seed,
            "g_ori": routed.g_ori,
            "g_add": routed.g_add,
            "g_ap": routed.g_ap,
            "design_ms": design_ms,
            "route_ms": route_ms,
        })
    return rows


def summarize(records, config: SuiteConfig) -> dict:
    """Aggregate raw records; a pure function of the records and the config
    (timing columns never enter)."""
    recs = list(records)
    cells: dict[str, dict] = {}
    overall: dict[str, float] = {}
    by_cell: dict[tuple[str, int, int], list[float]] = {}
    for r in recs:
        by_cell.setdefault((r["topology"], r["n_qubits"], r["depth"]), []).append(
            r["g_ap"]
        )
    for (topo, n, d), vals in sorted(by_cell.items()):
        entry: dict = {"count": len(vals), "mean": sum(vals) / len(vals)}
        if len(vals) >= 2:
            _, lo, hi = confidence_interval(vals)
            entry["ci_lo"] = lo
            entry["ci_hi"] = hi
        cells[f"{topo}|n{n}|d{d}"] = entry
    for topo in config.topologies:
        vals = [r["g_ap"] for r in recs if r["topology"] == topo]
        if vals:
            overall[topo] = sum(vals) / len(vals)

    comparison: dict = {}
    lattices_present = [t for t in config.topologies if t != "designed" and t in overall]
    if "designed" in overall and lattices_present:
        best = min(lattices_present, key=lambda t: overall[t])
        dmean = overall["designed"]
        comparison = {
            "best_lattice": best,
            "designed_mean": dmean,
            "best_lattice_mean": overall[best],
            "improvement_over_designed": overall[best] / dmean - 1.0 if dmean else 0.0,
            "reduction_vs_best_lattice": 1.0 - dmean / overall[best],
        }
        wins = 0
        total = 0
        for n in config.qubit_counts:
            for d in config.depths:
                dm = cells.get(f"designed|n{n}|d{d}")
                if dm is None:
                    continue
                total += 1
                if all(
                    dm["mean"] < cells[f"{t}|n{n}|d{d}"]["mean"]
                    for t in ("triangular", "cross_square")
                    if f"{t}|n{n}|d{d}" in cells
                ):
                    wins += 1
        comparison["cells_designed_beats_both"] = wins
        comparison["cells_total"] = total

    depth_trends: dict[str, dict] = {}
    if len(config.depths) >= 4:
        for topo in config.topologies:
            for n in config.qubit_counts:
                means = [
                    cells[f"{topo}|n{n}|d{d}"]["mean"]
                    for d in sorted(config.depths)
                    if f"{topo}|n{n}|d{d}" in cells
                ]
                if len(means) >= 4:
                    t = mann_kendall(means)
                    depth_trends[f"{topo}|n{n}"] = {
                        "s": t.s, "var_s": t.var_s, "z": t.z, "verdict": t.verdict,
                    }

    qubit_slopes: dict[str, float] = {}
    if len(config.qubit_counts) >= 2:
        for topo in config.topologies:
            for d in config.depths:
                pts = [
                    (n, cells[f"{topo}|n{n}|d{d}"]["mean"])
                    for n in sorted(config.qubit_counts)
                    if f"{topo}|n{n}|d{d}" in cells
                ]
                if len(pts) >= 2:
                    qubit_slopes[f"{topo}|d{d}"] = linreg_slope(
                        [p[0] for p in pts], [p[1] for p in pts]
                    )

    max_gap = max((r["g_ap"] for r in recs), default=0.0)
    width = max_gap / 20.0 if max_gap > 0 else 1.0
    edges = [i * width for i in range(21)]
    hist: dict[str, list[int]] = {}
    for topo in config.topologies:
        counts = [0] * 20
        for r in recs:
            if r["topology"] == topo:
                counts[min(int(r["g_ap"] / width), 19)] += 1
        hist[topo] = counts

    return {
        "config": {
            "qubit_counts": list(config.qubit_counts),
            "depths": list(config.depths),
            "samples": config.samples,
            "density": config.density,
            "alpha": config.alpha,
            "base_seed": config.base_seed,
            "topologies": list(config.topologies),
            "density_note": "g_ap levels depend on the matching density; "
                            "compare runs only at equal density",
        },
        "planar_exempt": {t: planar_exempt(t) for t in config.topologies
                          if t != "designed"},
        "cells": cells,
        "overall": overall,
        "comparison": comparison,
        "depth_trends": depth_trends,
        "qubit_slopes": qubit_slopes,
        "histogram": {"edges": edges, "counts": hist},
    }
