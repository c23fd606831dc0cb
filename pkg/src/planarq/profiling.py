"""Circuit profiling: gate-block weights and interaction matrices.

A block is a maximal run of two-qubit gates on one qubit pair. A run on
pair (m,l) is broken only by another two-qubit gate touching m or l;
one-qubit gates, measurements, barriers, and disjoint two-qubit gates are
invisible to it. Consecutive gates on the same pair therefore collapse into
a single block, which is what makes block counts a better proximity signal
than raw gate counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import TWO_QUBIT, Circuit
from .graph import CouplingGraph


def profile(c: Circuit) -> CouplingGraph:
    """Weighted coupling graph: weight of (m,l) counts gate blocks on (m,l).

    Qubits that never join a two-qubit gate stay as isolated vertexes.
    """
    last_touch = [-1] * c.n_qubits  # time of last two-qubit gate on the wire
    last_pair_gate: dict[tuple[int, int], int] = {}
    weights: dict[tuple[int, int], int] = {}
    t = 0
    for g in c.gates:
        if g.kind != TWO_QUBIT:
            continue
        a, b = g.qubits
        key = (a, b) if a < b else (b, a)
        prev = last_pair_gate.get(key, -2)
        # continuation iff nothing touched either wire since the pair's last gate
        if prev < max(last_touch[a], last_touch[b]) or prev == -2:
            weights[key] = weights.get(key, 0) + 1
        last_pair_gate[key] = t
        last_touch[a] = t
        last_touch[b] = t
        t += 1
    return CouplingGraph(c.n_qubits, [(u, v, w) for (u, v), w in weights.items()])


def profile_matrix(c: Circuit) -> np.ndarray:
    """profile() as a dense symmetric matrix."""
    ccg = profile(c)
    m = np.zeros((c.n_qubits, c.n_qubits))
    for u, v, w in ccg.edges():
        m[u, v] = w
        m[v, u] = w
    return m


def compute_S(c: Circuit, v: int) -> np.ndarray:
    """Split-affinity matrix for vertex v.

    S[m,l] counts blocks on (m,v) plus blocks on (l,v) inside the circuit
    restricted to two-qubit gates whose operands both lie in {m,l,v}.
    Restriction can merge blocks that outside gates had separated. Pairs
    where either side never meets v score zero, as do pairs involving v.
    """
    n = c.n_qubits
    if not 0 <= v < n:
        raise ValueError(f"vertex {v} out of range")
    # per-pair timestamps of two-qubit gates
    times: dict[tuple[int, int], list[int]] = {}
    for t, g in enumerate(c.gates):
        if g.kind != TWO_QUBIT:
            continue
        a, b = g.qubits
        key = (a, b) if a < b else (b, a)
        times.setdefault(key, []).append(t)

    def pkey(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    touchers = sorted({x for (a, b) in times for x in (a, b) if x != v
                       if pkey(x, v) in times})
    S = np.zeros((n, n))

    def blocks_restricted(x: int, breakers: list[int]) -> int:
        # runs of (x,v) gates in the merged stream of the triple's gates
        own = times[pkey(x, v)]
        count = 1
        bi = 0
        for t_prev, t_next in zip(own, own[1:]):
            while bi < len(breakers) and breakers[bi] <= t_prev:
                bi += 1
            if bi < len(breakers) and breakers[bi] < t_next:
                count += 1
        return count

    for i, m in enumerate(touchers):
        tm = times[pkey(m, v)]
        for l in touchers[i + 1:]:
            tl = times[pkey(l, v)]
            tml = times.get(pkey(m, l), [])
            merged_for_m = sorted(tl + tml)
            merged_for_l = sorted(tm + tml)
            s = blocks_restricted(m, merged_for_m) + blocks_restricted(l, merged_for_l)
            S[m, l] = s
            S[l, m] = s
    return S


@dataclass(frozen=True)
class InteractionMatrix:
    """I = alpha * M + (1 - alpha) * S, the allocation affinity for one split."""

    I: np.ndarray
    alpha: float
    vertex: int

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


def interaction_matrix(
    M: np.ndarray, S: np.ndarray, alpha: float = 0.5, vertex: int = -1
) -> InteractionMatrix:
    if M.shape != S.shape:
        raise ValueError("M and S must have matching shapes")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    I = alpha * M + (1.0 - alpha) * S
    np.fill_diagonal(I, 0.0)
    return InteractionMatrix(I=I, alpha=alpha, vertex=vertex)
