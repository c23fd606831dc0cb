"""Swap-insertion routing of logical circuits onto physical topologies.

Look-ahead heuristic router: gates execute as soon as their operands sit
on adjacent physical vertexes; otherwise candidate swaps on edges around
the blocked front are scored by the distance the front (and a bounded
look-ahead window) would still have to cover, damped by a per-vertex decay
that spreads consecutive swaps. A forced shortest-path fallback breaks the
rare scoring deadlock, so routing always terminates.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .circuit import TWO_QUBIT, Circuit, Gate
from .graph import CouplingGraph

EXTENDED_CAP = 20
EXTENDED_WEIGHT = 0.5
DECAY_STEP = 0.001
DECAY_RESET_EVERY = 5


class RoutingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RoutedCircuit:
    """Physical gate stream produced by routing one logical circuit."""

    gates: tuple[Gate, ...]
    swap_positions: tuple[int, ...]
    initial_map: tuple[int, ...]
    final_map: tuple[int, ...]
    g_ori: int
    g_add: int

    @property
    def g_ap(self) -> float:
        """Added-gate ratio g_add / g_ori; undefined without two-qubit gates."""
        if self.g_ori == 0:
            raise ValueError("g_ap undefined: circuit has no two-qubit gates")
        return self.g_add / self.g_ori


def bfs_order(pcg: CouplingGraph) -> list[int]:
    """Vertexes in breadth-first order from vertex 0, components in id order."""
    seen = [False] * pcg.n
    order = []
    for s in range(pcg.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(pcg.neighbors(v)):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return order


def identity_map(circuit_qubits: int, pcg: CouplingGraph) -> tuple[int, ...]:
    """Logical qubit i sits on the i-th vertex of the breadth-first order."""
    if circuit_qubits > pcg.n:
        raise RoutingError(f"{circuit_qubits} qubits exceed {pcg.n} vertexes")
    return tuple(bfs_order(pcg)[:circuit_qubits])


def _build_dag(gates: tuple[Gate, ...]) -> tuple[list[list[int]], list[int]]:
    succs: list[list[int]] = [[] for _ in gates]
    indeg = [0] * len(gates)
    last: dict[int, int] = {}
    for t, g in enumerate(gates):
        for q in g.qubits:
            p = last.get(q)
            if p is not None:
                succs[p].append(t)
                indeg[t] += 1
            last[q] = t
    return succs, indeg


def route(
    circuit: Circuit,
    pcg: CouplingGraph,
    initial_map: tuple[int, ...] | None = None,
    seed: int = 0,
    deadlock_threshold: int | None = None,
) -> RoutedCircuit:
    """Insert swaps so every two-qubit gate runs on a physical edge.

    initial_map[l] is the physical vertex of logical qubit l (defaults to
    breadth-first identity). Unoccupied vertexes may host swaps; they just
    move the hole.
    """
    nq = circuit.n_qubits
    if initial_map is None:
        initial_map = identity_map(nq, pcg)
    if len(initial_map) != nq:
        raise RoutingError("initial map length must equal the qubit count")
    if len(set(initial_map)) != nq or not all(0 <= p < pcg.n for p in initial_map):
        raise RoutingError("initial map must place qubits on distinct vertexes")
    if deadlock_threshold is None:
        deadlock_threshold = 3 * pcg.n + 10

    pi = np.array(initial_map, dtype=np.int64)
    inv = np.full(pcg.n, -1, dtype=np.int64)
    inv[pi] = np.arange(nq)
    dist = np.array(pcg.distance_matrix(), dtype=np.int64)
    decay = np.ones(pcg.n)
    edge_arr = np.array(pcg.edge_pairs(), dtype=np.int64).reshape(-1, 2)
    incident_ids: list[np.ndarray] = [
        np.array([], dtype=np.int64) for _ in range(pcg.n)
    ]
    by_vertex: list[list[int]] = [[] for _ in range(pcg.n)]
    for eid, (u, v) in enumerate(pcg.edge_pairs()):
        by_vertex[u].append(eid)
        by_vertex[v].append(eid)
    for v in range(pcg.n):
        incident_ids[v] = np.array(by_vertex[v], dtype=np.int64)

    gates = circuit.gates
    succs, indeg = _build_dag(gates)
    ready = [t for t in range(len(gates)) if indeg[t] == 0]
    heapq.heapify(ready)
    blocked: list[int] = []

    rng = np.random.Generator(np.random.PCG64(seed))
    out: list[Gate] = []
    swap_positions: list[int] = []
    g_add = 0
    swaps_since_reset = 0
    no_progress = 0

    def emit(g: Gate) -> None:
        phys = tuple(int(pi[q]) for q in g.qubits)
        out.append(Gate(g.kind, g.name, phys, g.cbit))

    def apply_swap(u: int, v: int) -> None:
        nonlocal g_add, swaps_since_reset
        lu, lv = int(inv[u]), int(inv[v])
        if lu >= 0:
            pi[lu] = v
        if lv >= 0:
            pi[lv] = u
        inv[u], inv[v] = lv, lu
        a, b = (u, v) if u < v else (v, u)
        out.append(Gate(TWO_QUBIT, "swap", (a, b)))
        swap_positions.append(len(out) - 1)
        g_add += 1
        decay[u] += DECAY_STEP
        decay[v] += DECAY_STEP
        swaps_since_reset += 1
        if swaps_since_reset >= DECAY_RESET_EVERY:
            decay.fill(1.0)
            swaps_since_reset = 0

    def extended_set() -> list[int]:
        found: list[int] = []
        seen = set(blocked)
        frontier = list(blocked)
        while frontier and len(found) < EXTENDED_CAP:
            nxt: list[int] = []
            for t in frontier:
                for s in succs[t]:
                    if s in seen:
                        continue
                    seen.add(s)
                    if gates[s].kind == TWO_QUBIT:
                        found.append(s)
                        if len(found) >= EXTENDED_CAP:
                            break
                    nxt.append(s)
                if len(found) >= EXTENDED_CAP:
                    break
            frontier = nxt
        return found

    front_log = np.empty((0, 2), dtype=np.int64)
    look_log = np.empty((0, 2), dtype=np.int64)
    look_w = np.empty(0)

    def rebuild_lookahead() -> None:
        nonlocal front_log, look_log, look_w
        front_log = np.array(
            [gates[t].qubits for t in blocked], dtype=np.int64
        ).reshape(-1, 2)
        ext = extended_set()
        ext_log = np.array(
            [gates[t].qubits for t in ext], dtype=np.int64
        ).reshape(-1, 2)
        look_log = np.concatenate([front_log, ext_log])
        f, e = len(front_log), len(ext_log)
        look_w = np.concatenate([
            np.full(f, 1.0 / f),
            np.full(e, EXTENDED_WEIGHT / e) if e else np.empty(0),
        ])

    def score_and_swap() -> None:
        nonlocal no_progress
        touched = np.unique(pi[front_log])
        ids = np.unique(np.concatenate([incident_ids[p] for p in touched]))
        C = edge_arr[ids[rng.permutation(len(ids))]]
        U, V = C[:, 0:1], C[:, 1:2]
        pos = pi[look_log]
        A, B = pos[:, 0], pos[:, 1]
        A2 = np.where(A == U, V, np.where(A == V, U, A))
        B2 = np.where(B == U, V, np.where(B == V, U, B))
        score = (dist[A2, B2] * look_w).sum(axis=1)
        score *= np.maximum(decay[C[:, 0]], decay[C[:, 1]])
        k = int(np.argmin(score))
        apply_swap(int(C[k, 0]), int(C[k, 1]))
        no_progress += 1

    def force_progress() -> None:
        nonlocal no_progress
        t = min(blocked)
        a, b = gates[t].qubits
        pa, pb = int(pi[a]), int(pi[b])
        # walk a's qubit along a shortest path until the gate fits
        prev = {pa: -1}
        queue = [pa]
        while queue:
            x = queue.pop(0)
            if x == pb:
                break
            for y in sorted(pcg.neighbors(x)):
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        if pb not in prev:
            raise RoutingError(f"no path between operands of gate {t}")
        path = [pb]
        while path[-1] != pa:
            path.append(prev[path[-1]])
        path.reverse()
        for x, y in zip(path, path[1:-1]):
            apply_swap(x, y)
        no_progress = 0

    lookahead_dirty = True
    while ready or blocked:
        progressed = False
        while ready:
            t = heapq.heappop(ready)
            g = gates[t]
            if g.kind == TWO_QUBIT:
                pu, pv = int(pi[g.qubits[0]]), int(pi[g.qubits[1]])
                if dist[pu, pv] != 1:
                    blocked.append(t)
                    lookahead_dirty = True
                    continue
            emit(g)
            progressed = True
            for s in succs[t]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    heapq.heappush(ready, s)
        if not blocked:
            break
        if progressed:
            no_progress = 0
            lookahead_dirty = True
        if lookahead_dirty:
            rebuild_lookahead()
            lookahead_dirty = False
        if no_progress >= deadlock_threshold:
            force_progress()
        else:
            score_and_swap()
        fpos = pi[front_log]
        hits = dist[fpos[:, 0], fpos[:, 1]] == 1
        if hits.any():
            still: list[int] = []
            for t, hit in zip(blocked, hits):
                if hit:
                    heapq.heappush(ready, t)
                else:
                    still.append(t)
            blocked = still
            lookahead_dirty = True

    g_ori = len(circuit.two_qubit_gates())
    return RoutedCircuit(
        gates=tuple(out),
        swap_positions=tuple(swap_positions),
        initial_map=tuple(int(p) for p in initial_map),
        final_map=tuple(int(p) for p in pi),
        g_ori=g_ori,
        g_add=g_add,
    )


def reverse_traversal_map(
    circuit: Circuit,
    pcg: CouplingGraph,
    iterations: int = 3,
    seed: int = 0,
    start: tuple[int, ...] | None = None,
) -> tuple[int, ...]:
    """Refine an initial map by routing the circuit forward and backward.

    Each round routes forward, then routes the reversed circuit from the
    forward run's final map; the backward final map seeds the next round.
    """
    m = start if start is not None else identity_map(circuit.n_qubits, pcg)
    rev = Circuit(circuit.n_qubits, tuple(reversed(circuit.gates)),
                  name=circuit.name + "_rev")
    for _ in range(iterations):
        fwd = route(circuit, pcg, m, seed)
        bwd = route(rev, pcg, fwd.final_map, seed)
        m = bwd.final_map
    return m
