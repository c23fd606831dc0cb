"""Topology synthesis: turn a weighted coupling graph into a planar,
degree-bounded physical layout.

The pipeline, per candidate media count N:

  1. rank vertexes and take the top N as media vertexes
  2. prune every edge that touches no media vertex
  3. split media vertexes whose degree still exceeds the bound, replacing
     each with a small connected structure and distributing its neighbors
     over the structure greedily
  4. re-add pruned edges in weight order while the degree bound and
     planarity survive

The N with the lowest weighted-distance score wins. N=1 always yields a
valid layout (a star prunes to a tree of stars), so synthesis cannot fail.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuit import Circuit
from .graph import (
    ISO_CAP,
    ConstraintSet,
    CouplingGraph,
    _lr_planar,
    enumerate_connected_graphs,
)
from .profiling import compute_S, interaction_matrix, profile, profile_matrix


class AllocationError(RuntimeError):
    """Raised when a structure has no free slot left for a neighbor."""


def rank_vertexes(g: CouplingGraph) -> list[int]:
    """Vertexes ordered by descending degree, then descending incident
    weight, then ascending spread of incident weights, then index."""
    keys = []
    for v in range(g.n):
        ws = [g.weight(v, u) for u in g.neighbors(v)]
        total = float(sum(ws))
        spread = float(np.std(ws)) if len(ws) > 1 else 0.0
        keys.append((-len(ws), -total, spread, v))
    keys.sort()
    return [k[3] for k in keys]


def prune(
    g: CouplingGraph, media: set[int]
) -> tuple[CouplingGraph, list[tuple[int, int, float]]]:
    """Drop every edge with no media endpoint. Returns (pruned, removed)."""
    kept = []
    removed = []
    for u, v, w in g.edges():
        if u in media or v in media:
            kept.append((u, v, w))
        else:
            removed.append((u, v, w))
    return CouplingGraph(g.n, kept, labels=g.labels), removed


# ---------------------------------------------------------------------------
# media structure search


@dataclass(frozen=True)
class StructureSearch:
    n: int
    structures: tuple[CouplingGraph, ...]


_SEARCH_CACHE: dict[tuple, StructureSearch] = {}


def _spider(n: int, legs: int) -> CouplingGraph:
    """Tree with one center vertex and `legs` paths of near-equal length."""
    sizes = [(n - 1) // legs + (1 if i < (n - 1) % legs else 0) for i in range(legs)]
    edges = []
    nxt = 1
    for size in sizes:
        prev = 0
        for _ in range(size):
            edges.append((prev, nxt, 1.0))
            prev = nxt
            nxt += 1
    return CouplingGraph(n, edges)


def _path(n: int) -> CouplingGraph:
    return CouplingGraph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def search_media_structures(
    k: int,
    max_degree: int = 6,
    constraints: ConstraintSet | None = None,
    min_n: int = 1,
) -> StructureSearch:
    """Smallest connected structures able to host k external neighbors.

    A structure on n vertexes with e edges satisfies the feasibility
    inequality e <= max_degree*n - k, and the sharper capacity bound
    2e + k <= max_degree*n (every edge consumes two degree slots, every
    hosted neighbor one). The capacity bound forces n >= (k-2)/(D-2) + 1
    vertexes for a connected structure, and caps e at n+1 when n is
    minimal, so the candidate set stays small. All non-isomorphic
    candidates at the smallest feasible n are returned while that stays
    cheap (n <= 6); at n of 7 or 8 only the trees are enumerated (every
    extra edge costs two hosting slots, and the non-tree classes blow up
    the isomorphism filter), and above the cap a constructive tree
    family stands in.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    if min_n <= 1 and k <= max_degree:
        raise ValueError(f"no split needed: {k} neighbors fit degree {max_degree}")
    cs = constraints if constraints is not None else ConstraintSet(max_degree, True)
    key = (k, max_degree, cs, min_n)
    hit = _SEARCH_CACHE.get(key)
    if hit is not None:
        return hit

    D = max_degree
    n = max(min_n, 1, -(-(k - 2) // (D - 2)) if k > 2 else 1)
    while True:
        e_max = (D * n - k) // 2
        if e_max >= max(n - 1, 0):
            if n <= 6:
                cands = enumerate_connected_graphs(n, constraints=cs, max_edges=e_max)
            elif n <= ISO_CAP:
                cands = enumerate_connected_graphs(n, constraints=cs, max_edges=n - 1)
            else:
                cands = [_path(n)]
                for legs in range(3, min(D, n - 1) + 1):
                    cands.append(_spider(n, legs))
            if cands:
                out = StructureSearch(n=n, structures=tuple(cands))
                _SEARCH_CACHE[key] = out
                return out
        n += 1


# ---------------------------------------------------------------------------
# allocation


def allocate(
    structure: CouplingGraph,
    row_sum: np.ndarray,
    pair_w: np.ndarray,
    max_degree: int = 6,
) -> list[list[int]]:
    """Distribute neighbors over structure vertexes greedily.

    row_sum[a] is neighbor a's total affinity (used to pick the anchor),
    pair_w[a, b] the affinity between neighbors a and b. The anchor goes
    on the freest structure vertex; each later neighbor is the one most
    attracted to the placed set and lands where the distance-weighted
    pull from already-placed neighbors is smallest. Returns one neighbor
    index list per structure vertex.
    """
    ns = structure.n
    m = int(row_sum.shape[0])
    free = np.array([max_degree - structure.degree(i) for i in range(ns)], dtype=float)
    if free.sum() < m:
        raise AllocationError(f"structure capacity {int(free.sum())} < {m} neighbors")
    C = np.array(structure.distance_matrix(), dtype=float)
    alloc: list[list[int]] = [[] for _ in range(ns)]
    # G[j, a]: pull of structure vertex j on neighbor a
    G = np.zeros((ns, m))
    attraction = np.zeros(m)
    unplaced = np.ones(m, dtype=bool)

    order = np.where(unplaced, row_sum, -np.inf)
    a = int(np.argmax(order))
    loc = max(range(ns), key=lambda i: (free[i], -i))
    for step in range(m):
        if step > 0:
            a = int(np.argmax(np.where(unplaced, attraction, -np.inf)))
            s = C @ G[:, a]
            s[free <= 0] = np.inf
            if not np.isfinite(s).any():
                raise AllocationError("no structure vertex has a free slot")
            loc = int(np.argmin(s))
        alloc[loc].append(a)
        unplaced[a] = False
        free[loc] -= 1
        G[loc] += pair_w[a]
        attraction += pair_w[a]
    return alloc


def score_allocation(
    structure: CouplingGraph, alloc: list[list[int]], pair_w: np.ndarray
) -> float:
    """Distance-weighted affinity left between structure vertexes: for every
    ordered neighbor pair split across vertexes i and j, add C[i,j] * w."""
    m = pair_w.shape[0]
    group = np.zeros(m, dtype=int)
    for i, members in enumerate(alloc):
        for a in members:
            group[a] = i
    C = np.array(structure.distance_matrix(), dtype=float)
    return float((C[np.ix_(group, group)] * pair_w).sum())


@dataclass(frozen=True)
class SplitRecord:
    vertex: int
    structure_edges: tuple[tuple[int, int], ...]
    alloc: dict[int, tuple[int, ...]]
    home: int
    ancillas: tuple[int, ...]
    f_score: float


def split_media_vertex(
    g: CouplingGraph,
    v: int,
    I: np.ndarray,
    rep: list[int],
    constraints: ConstraintSet,
) -> tuple[CouplingGraph, SplitRecord]:
    """Replace v by its best structure/allocation pair (lowest leftover
    affinity score; earlier candidate on ties). Structure vertex 0 keeps
    v's id, the rest get fresh ids. Internal edges carry weight zero,
    reattached edges keep their current weight. The home vertex is the
    one hosting the neighbors v interacts with most."""
    D = constraints.max_degree
    nbrs = sorted(g.neighbors(v))
    k = len(nbrs)
    if k <= D:
        raise ValueError(f"vertex {v} has degree {k} <= {D}, nothing to split")
    rows = np.array([rep[u] for u in nbrs])
    pair_w = I[np.ix_(rows, rows)].copy()
    np.fill_diagonal(pair_w, 0.0)
    row_sum = I[rows].sum(axis=1)

    best = None
    min_n = 1
    for _ in range(8):
        found = search_media_structures(k, D, constraints, min_n=min_n)
        for st in found.structures:
            if sum(D - st.degree(i) for i in range(st.n)) < k:
                continue
            try:
                al = allocate(st, row_sum, pair_w, D)
            except AllocationError:
                continue
            f = score_allocation(st, al, pair_w)
            if best is None or f < best[0]:
                best = (f, st, al)
        if best is not None:
            break
        min_n = found.n + 1
    if best is None:
        raise AllocationError(f"no structure hosts the {k} neighbors of {v}")

    f, st, al = best
    mvert = [v] + list(range(g.n, g.n + st.n - 1))
    edges = [(a, b, w) for a, b, w in g.edges() if a != v and b != v]
    sedges = []
    for a, b, _ in st.edges():
        edges.append((mvert[a], mvert[b], 0.0))
        sedges.append((mvert[a], mvert[b]))
    alloc_ids: dict[int, tuple[int, ...]] = {}
    for i, members in enumerate(al):
        ids = tuple(nbrs[a] for a in members)
        alloc_ids[mvert[i]] = ids
        for u in ids:
            edges.append((mvert[i], u, g.weight(v, u)))
    pull = [float(sum(I[rep[u], rep[v]] for u in alloc_ids[mvert[i]])) for i in range(st.n)]
    home = mvert[int(np.argmax(pull))]
    new_g = CouplingGraph(g.n + st.n - 1, edges)
    rec = SplitRecord(
        vertex=v,
        structure_edges=tuple(sedges),
        alloc=alloc_ids,
        home=home,
        ancillas=tuple(mvert[1:]),
        f_score=f,
    )
    return new_g, rec


# ---------------------------------------------------------------------------
# recovery


def recover(
    g: CouplingGraph,
    removed: list[tuple[int, int, float]],
    placement: dict[int, int],
    constraints: ConstraintSet,
) -> tuple[CouplingGraph, list[tuple[int, int, float, bool]]]:
    """Re-add pruned edges heaviest first while degree and planarity hold.

    Endpoints of split vertexes land on their home vertex. Returns the
    final graph and the accept/reject decision per candidate edge.
    """
    D = constraints.max_degree
    order = sorted(removed, key=lambda e: (-e[2], e[0], e[1]))
    n = g.n
    edges = [(u, v) for u, v, _ in g.edges()]
    weights = {(u, v): w for u, v, w in g.edges()}
    deg = [g.degree(i) for i in range(n)]
    decisions = []
    for u0, v0, w in order:
        u, v = placement.get(u0, u0), placement.get(v0, v0)
        if u > v:
            u, v = v, u
        ok = (
            u != v
            and (u, v) not in weights
            and deg[u] < D
            and deg[v] < D
            and (not constraints.require_planar or n < 3 or len(edges) + 1 <= 3 * n - 6)
        )
        if ok and constraints.require_planar:
            edges.append((u, v))
            ok = _lr_planar(n, edges)
            if not ok:
                edges.pop()
        elif ok:
            edges.append((u, v))
        if ok:
            weights[(u, v)] = w
            deg[u] += 1
            deg[v] += 1
        decisions.append((u0, v0, w, ok))
    return CouplingGraph(n, [(u, v, weights[(u, v)]) for u, v in edges]), decisions


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class DesignResult:
    pcg: CouplingGraph
    placement: dict[int, int]
    ranking: tuple[int, ...]
    media_count: int
    score: float
    ancilla_count: int
    per_n_scores: dict[int, float | None]
    audit: dict = field(default_factory=dict, compare=False)


def _score_layout(
    ccg: CouplingGraph, final: CouplingGraph, placement: dict[int, int]
) -> float:
    dist = final.distance_matrix()
    max_w = max((w for _, _, w in ccg.edges()), default=0.0)
    total = 0.0
    for u, v, w in ccg.edges():
        d = dist[placement.get(u, u)][placement.get(v, v)]
        if d < 0:
            # disconnected pair: flat penalty keeps argmin total without inf
            total += final.n * max_w
        else:
            total += w * d
    return total


def design(
    source: Circuit | CouplingGraph,
    alpha: float = 0.5,
    constraints: ConstraintSet | None = None,
    keep_audit: bool = False,
) -> DesignResult:
    """Synthesize a physical layout for a circuit or its coupling graph.

    With a circuit, split decisions use the blended affinity
    alpha*blocks + (1-alpha)*split_affinity; with a bare graph only the
    (scaled) block weights inform them.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    cs = constraints if constraints is not None else ConstraintSet(6, True)
    D = cs.max_degree
    if isinstance(source, Circuit):
        circ: Circuit | None = source
        ccg = profile(source)
        M = profile_matrix(source)
    else:
        circ = None
        ccg = source
        M = np.zeros((source.n, source.n))
        for u, v, w in source.edges():
            M[u, v] = w
            M[v, u] = w

    s_cache: dict[int, np.ndarray] = {}

    def I_for(v: int) -> np.ndarray:
        if circ is None:
            return alpha * M
        if v not in s_cache:
            s_cache[v] = compute_S(circ, v)
        return interaction_matrix(M, s_cache[v], alpha, v).I

    ranking = rank_vertexes(ccg)
    total_w = ccg.total_weight()
    n = ccg.n

    best: tuple[float, int, dict] | None = None
    per_n: dict[int, float | None] = {}
    n_snapshots: dict[int, dict] = {}
    for N in range(1, n + 1):
        art = _run_pipeline(ccg, ranking, N, I_for, cs, D)
        per_n[N] = None if art is None else art["score"]
        if keep_audit:
            snap = {"pruned_edges": None, "score": per_n[N]}
            if art is not None:
                gone = {(u, v) for u, v, _ in art["removed"]}
                snap["pruned_edges"] = [
                    list(e) for e in ccg.edge_pairs() if e not in gone
                ]
            n_snapshots[N] = snap
        if art is None:
            continue
        if best is None or art["score"] < best[0]:
            best = (art["score"], N, art)
        if best[0] <= total_w:
            break
    assert best is not None  # N=1 always survives
    score, media_count, art = best

    audit = {}
    if keep_audit:
        # plain lists/dicts only, so the audit round-trips through JSON
        audit = {
            "media": list(ranking[:media_count]),
            "pruned_away": [list(e) for e in art["removed"]],
            "splits": [
                {
                    "vertex": s.vertex,
                    "structure_edges": [list(e) for e in s.structure_edges],
                    "alloc": [[k, list(s.alloc[k])] for k in sorted(s.alloc)],
                    "home": s.home,
                    "ancillas": list(s.ancillas),
                    "f_score": s.f_score,
                }
                for s in art["splits"]
            ],
            "recover_decisions": [list(d) for d in art["decisions"]],
            "final_edges": [list(e) for e in art["final"].edges()],
            "placement": [[q, art["placement"][q]]
                          for q in sorted(art["placement"])],
            "per_n": n_snapshots,
        }
    return DesignResult(
        pcg=art["final"],
        placement=art["placement"],
        ranking=tuple(ranking),
        media_count=media_count,
        score=score,
        ancilla_count=art["final"].n - n,
        per_n_scores=per_n,
        audit=audit,
    )


def _run_pipeline(
    ccg: CouplingGraph,
    ranking: list[int],
    N: int,
    I_for: Callable[[int], np.ndarray],
    cs: ConstraintSet,
    D: int,
) -> dict | None:
    media = ranking[:N]
    media_set = set(media)
    pruned, removed = prune(ccg, media_set)
    # splits only relieve media vertexes; anything else over the bound is fatal
    for x in range(pruned.n):
        if x not in media_set and pruned.degree(x) > D:
            return None
    # a non-planar pruned base stays a minor of every split, so no N rescue
    if cs.require_planar and not _lr_planar(pruned.n, pruned.edge_pairs()):
        return None

    work = pruned
    rep = list(range(ccg.n))
    placement = {v: v for v in range(ccg.n)}
    splits = []
    for mv in media:
        if work.degree(mv) > D:
            work, srec = split_media_vertex(work, mv, I_for(mv), rep, cs)
            rep.extend([rep[mv]] * len(srec.ancillas))
            placement[mv] = srec.home
            splits.append(srec)
    if any(work.degree(i) > D for i in range(work.n)):
        return None
    if cs.require_planar and not _lr_planar(work.n, work.edge_pairs()):
        return None

    final, decisions = recover(work, removed, placement, cs)
    score = _score_layout(ccg, final, placement)
    return {
        "score": score,
        "final": final,
        "placement": placement,
        "removed": removed,
        "splits": splits,
        "decisions": decisions,
    }
