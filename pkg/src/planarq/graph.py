"""Coupling graphs, hardware constraints, planarity, and small-graph tools.

The planarity routine is a left-right-criterion test operating on flat
integer arrays so it stays cheap inside the edge-recovery loop. Isomorphism
and exhaustive enumeration are only defined for small vertex counts; they
back the media-structure search, whose useful instances are tiny.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

ISO_CAP = 8  # canonical labeling / enumeration are exact up to this size


@dataclass(frozen=True)
class ConstraintSet:
    """Hardware legality: degree bound and optional planarity requirement."""

    max_degree: int = 6
    require_planar: bool = True

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be positive")


@dataclass(frozen=True)
class ViolationReport:
    ok: bool
    over_degree: tuple[int, ...] = ()
    nonplanar: bool = False

    def message(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        if self.over_degree:
            parts.append(f"degree bound exceeded at vertexes {list(self.over_degree)}")
        if self.nonplanar:
            parts.append("graph is not planar")
        return "; ".join(parts)


class CouplingGraph:
    """Undirected simple graph with integer vertexes and optional edge weights.

    Instances are value-like: mutating helpers return new graphs. Weights are
    gate-block counts on coupling graphs and zero on hardware graphs.
    """

    __slots__ = ("n", "_w", "_adj", "_labels", "_dist")

    def __init__(self, n: int, edges=(), labels: tuple[str, ...] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self._w: dict[tuple[int, int], float] = {}
        self._adj: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 0
            else:
                u, v, w = e
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            key = (u, v) if u < v else (v, u)
            if key in self._w:
                raise ValueError(f"duplicate edge {key}")
            self._w[key] = w
            self._adj[u].add(v)
            self._adj[v].add(u)
        if labels is not None and len(labels) != n:
            raise ValueError("labels length must equal vertex count")
        self._labels = labels
        self._dist: list[list[int]] | None = None

    # -- basic queries ----------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self._w)

    def edges(self) -> list[tuple[int, int, float]]:
        return [(u, v, w) for (u, v), w in sorted(self._w.items())]

    def edge_pairs(self) -> list[tuple[int, int]]:
        return sorted(self._w.keys())

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._w or (v, u) in self._w

    def weight(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        return self._w[key]

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def total_weight(self) -> float:
        return sum(self._w.values())

    @property
    def labels(self) -> tuple[str, ...] | None:
        return self._labels

    def __eq__(self, other) -> bool:
        if not isinstance(other, CouplingGraph):
            return NotImplemented
        return self.n == other.n and self._w == other._w

    def __hash__(self):
        return hash((self.n, frozenset(self._w.items())))

    def __repr__(self):
        return f"CouplingGraph(n={self.n}, edges={self.n_edges})"

    # -- derived graphs ----------------------------------------------------

    def with_edge(self, u: int, v: int, w: float = 0) -> "CouplingGraph":
        return CouplingGraph(self.n, list(self.edges()) + [(u, v, w)], self._labels)

    def unweighted(self) -> "CouplingGraph":
        return CouplingGraph(self.n, [(u, v, 0) for u, v, _ in self.edges()], self._labels)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        d = {"n": self.n, "edges": [[u, v, w] for u, v, w in self.edges()]}
        if self._labels is not None:
            d["labels"] = list(self._labels)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "CouplingGraph":
        labels = tuple(d["labels"]) if "labels" in d else None
        return cls(d["n"], d.get("edges", ()), labels)

    @classmethod
    def from_json(cls, text: str) -> "CouplingGraph":
        return cls.from_json_dict(json.loads(text))

    # -- distances -----------------------------------------------------------

    def shortest_paths(self, source: int) -> list[int]:
        """BFS hop counts from source; -1 marks unreachable vertexes."""
        dist = [-1] * self.n
        dist[source] = 0
        frontier = [source]
        adj = self._adj
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if dist[v] < 0:
                        dist[v] = d
                        nxt.append(v)
            frontier = nxt
        return dist

    def distance_matrix(self) -> list[list[int]]:
        if self._dist is None:
            self._dist = [self.shortest_paths(s) for s in range(self.n)]
        return self._dist

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return all(d >= 0 for d in self.shortest_paths(0))


def is_planar(g: CouplingGraph) -> bool:
    return _lr_planar(g.n, g.edge_pairs())


def check_constraints(g: CouplingGraph, constraints: ConstraintSet) -> ViolationReport:
    over = tuple(v for v in range(g.n) if g.degree(v) > constraints.max_degree)
    nonplanar = bool(constraints.require_planar and not is_planar(g))
    return ViolationReport(ok=not over and not nonplanar, over_degree=over, nonplanar=nonplanar)


# -- left-right planarity ------------------------------------------------


def _lr_planar(n: int, edge_list: list[tuple[int, int]]) -> bool:
    """Left-right criterion planarity test on an edge list.

    Phase one orients the graph by DFS and computes nesting order; phase two
    maintains a stack of conflict pairs of back-edge intervals. A constraint
    that cannot be satisfied on either side witnesses a Kuratowski subgraph.
    """
    m = len(edge_list)
    if n <= 4 or m <= 3:
        return True
    if m > 3 * n - 6:
        return False

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for eid, (u, v) in enumerate(edge_list):
        adj[u].append((v, eid))
        adj[v].append((u, eid))

    NONE = -1
    oriented = [False] * m
    esrc = [0] * m
    edst = [0] * m
    is_tree = [False] * m
    lowpt = [0] * m
    lowpt2 = [0] * m
    nesting = [0] * m
    height = [NONE] * n
    parent_edge = [NONE] * n

    def finish_edge(eid: int):
        # nesting depth, then fold lowpoints into the parent edge
        v = esrc[eid]
        nd = 2 * lowpt[eid]
        if lowpt2[eid] < height[v]:
            nd += 1
        nesting[eid] = nd
        pe = parent_edge[v]
        if pe != NONE:
            if lowpt[eid] < lowpt[pe]:
                lowpt2[pe] = min(lowpt[pe], lowpt2[eid])
                lowpt[pe] = lowpt[eid]
            elif lowpt[eid] > lowpt[pe]:
                if lowpt[eid] < lowpt2[pe]:
                    lowpt2[pe] = lowpt[eid]
            elif lowpt2[eid] < lowpt2[pe]:
                lowpt2[pe] = lowpt2[eid]

    for root in range(n):
        if height[root] != NONE:
            continue
        height[root] = 0
        stack: list[list[int]] = [[root, 0]]
        while stack:
            frame = stack[-1]
            v, i = frame
            adj_v = adj[v]
            descended = False
            while i < len(adj_v):
                w, eid = adj_v[i]
                i += 1
                if oriented[eid]:
                    continue
                oriented[eid] = True
                esrc[eid] = v
                edst[eid] = w
                lowpt[eid] = height[v]
                lowpt2[eid] = height[v]
                if height[w] == NONE:
                    is_tree[eid] = True
                    parent_edge[w] = eid
                    height[w] = height[v] + 1
                    frame[1] = i
                    stack.append([w, 0])
                    descended = True
                    break
                lowpt[eid] = height[w]
                finish_edge(eid)
            if descended:
                continue
            frame[1] = i
            stack.pop()
            if parent_edge[v] != NONE:
                finish_edge(parent_edge[v])

    # outgoing adjacency ordered by nesting depth
    out: list[list[int]] = [[] for _ in range(n)]
    for eid in range(m):
        out[esrc[eid]].append(eid)
    for v in range(n):
        out[v].sort(key=lambda e: (nesting[e], e))

    # conflict pairs are 4-slot lists [L.low, L.high, R.low, R.high]; NONE empty
    S: list[list[int]] = []
    stack_bottom = [0] * m
    lowpt_edge = list(range(m))
    ref = [NONE] * m

    def lowest(P: list[int]) -> int:
        if P[0] == NONE:
            return lowpt[P[2]]
        if P[2] == NONE:
            return lowpt[P[0]]
        return min(lowpt[P[0]], lowpt[P[2]])

    def conflicting(low: int, high: int, b: int) -> bool:
        return high != NONE and lowpt[high] > lowpt[b]

    def add_constraints(ei: int, e: int) -> bool:
        P = [NONE, NONE, NONE, NONE]
        # merge return edges of ei into P right
        while True:
            Q = S.pop()
            if Q[0] != NONE:
                Q[0], Q[1], Q[2], Q[3] = Q[2], Q[3], Q[0], Q[1]
            if Q[0] != NONE:
                return False
            if lowpt[Q[2]] > lowpt[e]:
                if P[2] == NONE:
                    P[3] = Q[3]
                else:
                    ref[P[2]] = Q[3]
                P[2] = Q[2]
            else:
                ref[Q[2]] = lowpt_edge[e]
            if len(S) == stack_bottom[ei]:
                break
        # merge conflicting return edges of earlier siblings into P left
        while S and (conflicting(S[-1][0], S[-1][1], ei) or conflicting(S[-1][2], S[-1][3], ei)):
            Q = S.pop()
            if conflicting(Q[2], Q[3], ei):
                Q[0], Q[1], Q[2], Q[3] = Q[2], Q[3], Q[0], Q[1]
            if conflicting(Q[2], Q[3], ei):
                return False
            ref[P[2]] = Q[3]
            if Q[2] != NONE:
                P[2] = Q[2]
            if P[0] == NONE:
                P[1] = Q[1]
            else:
                ref[P[0]] = Q[1]
            P[0] = Q[0]
        if P[0] != NONE or P[2] != NONE:
            S.append(P)
        return True

    def remove_back_edges(e: int):
        u = esrc[e]
        # drop conflict pairs whose whole interval returns to u
        while S and lowest(S[-1]) == height[u]:
            S.pop()
        if S:
            P = S.pop()
            while P[1] != NONE and edst[P[1]] == u:
                P[1] = ref[P[1]]
            if P[1] == NONE and P[0] != NONE:
                ref[P[0]] = P[2]
                P[0] = NONE
            while P[3] != NONE and edst[P[3]] == u:
                P[3] = ref[P[3]]
            if P[3] == NONE and P[2] != NONE:
                ref[P[2]] = P[0]
                P[2] = NONE
            if P[0] != NONE or P[2] != NONE:
                S.append(P)
        if lowpt[e] < height[u] and S:
            hl, hr = S[-1][1], S[-1][3]
            if hl != NONE and (hr == NONE or lowpt[hl] > lowpt[hr]):
                ref[e] = hl
            else:
                ref[e] = hr

    for root in range(n):
        if parent_edge[root] != NONE or height[root] != 0:
            continue
        # iterative testing DFS; frame = [v, out-position, awaiting-child flag]
        stack2: list[list[int]] = [[root, 0, 0]]
        while stack2:
            frame = stack2[-1]
            v, i, resume = frame
            out_v = out[v]
            e = parent_edge[v]
            descended = False
            while i < len(out_v):
                ei = out_v[i]
                if not resume:
                    stack_bottom[ei] = len(S)
                    if is_tree[ei]:
                        frame[1] = i
                        frame[2] = 1
                        stack2.append([edst[ei], 0, 0])
                        descended = True
                        break
                    lowpt_edge[ei] = ei
                    S.append([NONE, NONE, ei, ei])
                resume = 0
                if lowpt[ei] < height[v]:  # ei has a return edge below v
                    if i == 0:
                        if e != NONE:
                            lowpt_edge[e] = lowpt_edge[ei]
                    elif not add_constraints(ei, e):
                        return False
                i += 1
            if descended:
                continue
            stack2.pop()
            if e != NONE:
                remove_back_edges(e)
    return True


# -- canonical labeling, isomorphism, enumeration -------------------------


def _adj_masks(n: int, edges) -> list[int]:
    masks = [0] * n
    for e in edges:
        u, v = e[0], e[1]
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _refine_colors(n: int, masks: list[int]) -> list[int]:
    colors = [bin(m).count("1") for m in masks]
    for _ in range(n):
        sig = [
            (colors[v], tuple(sorted(colors[u] for u in range(n) if masks[v] >> u & 1)))
            for v in range(n)
        ]
        lut = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [lut[s] for s in sig]
        if new == colors:
            break
        colors = new
    return colors


def _tree_canonical(n: int, adj: list[set[int]]) -> tuple:
    """AHU-style canonical edge tuple for a connected tree on n vertexes."""
    if n == 1:
        return (1, ())
    # find the center(s) by repeated leaf stripping
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    removed = 0
    alive = [True] * n
    while n - removed > 2:
        nxt = []
        for v in layer:
            alive[v] = False
            removed += 1
            for u in adj[v]:
                if alive[u]:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt
    centers = [v for v in range(n) if alive[v]]

    def rooted(root: int) -> tuple:
        # canonical code and canonical relabeled edges for the rooted tree
        code: dict[int, tuple] = {}
        order: dict[int, list[int]] = {}
        stack = [(root, -1, False)]
        while stack:
            v, parent, done = stack.pop()
            if not done:
                stack.append((v, parent, True))
                for u in adj[v]:
                    if u != parent:
                        stack.append((u, v, False))
            else:
                kids = [u for u in adj[v] if u != parent]
                kids.sort(key=lambda u: code[u])
                order[v] = kids
                code[v] = tuple(sorted(code[u] for u in kids))
        # DFS relabel following canonical child order
        label = {root: 0}
        edges = []
        walk = [root]
        nxt = 1
        while walk:
            v = walk.pop()
            for u in order[v]:
                label[u] = nxt
                edges.append((label[v], nxt))
                nxt += 1
                walk.append(u)
        return (code[root], tuple(sorted(edges)))

    best = min(rooted(c) for c in centers)
    return (n, best[1])


def canonical_form(g: CouplingGraph) -> tuple:
    """Canonical edge tuple invariant under vertex relabeling. Exact and
    intended for graphs with at most ISO_CAP vertexes."""
    n = g.n
    if n > ISO_CAP:
        raise ValueError(f"canonical_form supports at most {ISO_CAP} vertexes, got {n}")
    if g.n_edges == n - 1 and g.is_connected():
        return _tree_canonical(n, [g.neighbors(v) for v in range(n)])
    masks = _adj_masks(n, g.edge_pairs())
    colors = _refine_colors(n, masks)
    # order candidate vertexes by refined color so equivalent choices group
    best: list[tuple[int, ...]] = []

    def upper_rows(perm: list[int]) -> tuple[int, ...]:
        # adjacency rows under the partial permutation, earlier rows first
        rows = []
        for i, p in enumerate(perm):
            row = 0
            for j, q in enumerate(perm):
                if j >= i:
                    break
                if masks[p] >> q & 1:
                    row |= 1 << j
            rows.append(row)
        return tuple(rows)

    order = sorted(range(n), key=lambda v: (colors[v], v))

    def backtrack(perm: list[int], used: int):
        nonlocal best
        i = len(perm)
        if i == n:
            cand = upper_rows(perm)
            if not best or cand < best[0]:
                best = [cand]
            return
        # candidates sorted by color class then index for stable exploration
        partial_best = None
        for v in order:
            if used >> v & 1:
                continue
            row = 0
            for j, q in enumerate(perm):
                if masks[v] >> q & 1:
                    row |= 1 << j
            key = row
            if partial_best is None or key < partial_best:
                partial_best = key
        for v in order:
            if used >> v & 1:
                continue
            row = 0
            for j, q in enumerate(perm):
                if masks[v] >> q & 1:
                    row |= 1 << j
            if row != partial_best:
                continue
            perm.append(v)
            backtrack(perm, used | (1 << v))
            perm.pop()

    backtrack([], 0)
    rows = best[0]
    edges = []
    for i in range(n):
        for j in range(i):
            if rows[i] >> j & 1:
                edges.append((j, i))
    return (n, tuple(sorted(edges)))


def are_isomorphic(a: CouplingGraph, b: CouplingGraph) -> bool:
    if a.n > ISO_CAP or b.n > ISO_CAP:
        raise ValueError(f"isomorphism check supports at most {ISO_CAP} vertexes")
    if a.n != b.n or a.n_edges != b.n_edges:
        return False
    return canonical_form(a) == canonical_form(b)


def enumerate_connected_graphs(
    n: int,
    constraints: ConstraintSet | None = None,
    max_edges: int | None = None,
) -> list[CouplingGraph]:
    """All connected graphs on n unlabeled vertexes meeting the constraints,
    one representative per isomorphism class, grown tree-first by edge
    augmentation. Deterministic order: edge count, then canonical form."""
    if n > ISO_CAP:
        raise ValueError(f"enumeration supports at most {ISO_CAP} vertexes, got {n}")
    if n < 1:
        return []
    limit = n * (n - 1) // 2
    if max_edges is not None:
        limit = min(limit, max_edges)
    if limit < n - 1:
        return []

    def ok(edges: tuple) -> bool:
        if constraints is None:
            return True
        deg: dict[int, int] = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        if deg and max(deg.values()) > constraints.max_degree:
            return False
        if constraints.require_planar and not _lr_planar(n, list(edges)):
            return False
        return True

    # unlabeled trees on n vertexes: grow one leaf at a time
    trees: dict[tuple, tuple] = {}
    if n == 1:
        trees[(1, ())] = ()
    else:
        level = {(1, ()): ()}
        for size in range(2, n + 1):
            nxt: dict[tuple, tuple] = {}
            for edges in level.values():
                for attach in range(size - 1):
                    cand = tuple(sorted(edges + ((attach, size - 1),)))
                    key = canonical_form(CouplingGraph(size, cand))
                    if key not in nxt:
                        nxt[key] = cand
            level = nxt
        trees = level

    result: list[tuple[int, tuple, tuple]] = []  # (n_edges, canon, edges)
    frontier: dict[tuple, tuple] = {}
    for key, edges in trees.items():
        if ok(edges):
            frontier[key] = edges
            result.append((len(edges), key, edges))
    e_count = n - 1
    while e_count < limit and frontier:
        nxt: dict[tuple, tuple] = {}
        for edges in frontier.values():
            present = set(edges)
            for u in range(n):
                for v in range(u + 1, n):
                    if (u, v) in present:
                        continue
                    cand = tuple(sorted(edges + ((u, v),)))
                    g = CouplingGraph(n, cand)
                    key = canonical_form(g)
                    if key in nxt:
                        continue
                    if ok(cand):
                        nxt[key] = cand
        for key, edges in sorted(nxt.items()):
            result.append((len(edges), key, edges))
        frontier = nxt
        e_count += 1
    result.sort(key=lambda t: (t[0], t[1]))
    return [CouplingGraph(n, edges) for _, _, edges in result]
