import random
import statistics

import numpy as np
import pytest

from planarq.circuit import RandomCircuitSpec, generate_random_circuit
from planarq.design import (
    AllocationError,
    allocate,
    design,
    prune,
    rank_vertexes,
    recover,
    score_allocation,
    search_media_structures,
    split_media_vertex,
)
from planarq.graph import (
    ConstraintSet,
    CouplingGraph,
    are_isomorphic,
    check_constraints,
    is_planar,
)

from conftest import HUB_CCG_EDGES, HUB_N, hub_circuit
from oracles import (
    allocation_f,
    exhaustive_min_allocation_f,
    greedy_allocation_trace,
    planar_by_kuratowski,
)

D6 = ConstraintSet(max_degree=6)


def random_ccg(rng, n, max_w=9):
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.35:
                edges.append((i, j, rng.randrange(1, max_w + 1)))
    return CouplingGraph(n, edges)


class TestRanking:
    def test_two_vertex_tie_broken_by_index(self):
        g = CouplingGraph(2, [(0, 1, 4)])
        assert rank_vertexes(g) == [0, 1]

    def test_matches_triple_oracle(self):
        rng = random.Random(11)
        for trial in range(30):
            g = random_ccg(rng, 10)
            triples = []
            for v in range(10):
                ws = [g.weight(v, u) for u in sorted(g.neighbors(v))]
                deg = len(ws)
                total = sum(ws)
                disp = statistics.pstdev(ws) if deg > 1 else 0.0
                triples.append((-deg, -total, disp, v))
            want = [t[3] for t in sorted(triples)]
            assert rank_vertexes(g) == want, trial

    def test_scale_invariance(self):
        rng = random.Random(12)
        g = random_ccg(rng, 9)
        scaled = CouplingGraph(9, [(u, v, w * 7) for u, v, w in g.edges()])
        assert rank_vertexes(g) == rank_vertexes(scaled)

    def test_hub_fixture_order(self):
        g = CouplingGraph(HUB_N, HUB_CCG_EDGES)
        assert rank_vertexes(g) == [6, 7, 5, 3, 0, 4, 2, 1]


class TestPrune:
    def test_survivor_predicate_edge_by_edge(self):
        rng = random.Random(21)
        for trial in range(20):
            g = random_ccg(rng, 9)
            media = set(rng.sample(range(9), rng.randrange(1, 4)))
            pruned, removed = prune(g, media)
            for u, v, w in g.edges():
                survives = u in media or v in media
                assert pruned.has_edge(u, v) == survives
            assert sorted(removed) == sorted(
                e for e in g.edges() if e[0] not in media and e[1] not in media
            )

    def test_media_all_removes_nothing(self):
        g = CouplingGraph(5, [(0, 1, 2), (2, 3, 1), (3, 4, 4)])
        pruned, removed = prune(g, set(range(5)))
        assert pruned.edges() == g.edges() and removed == []

    def test_hub_star(self):
        g = CouplingGraph(HUB_N, HUB_CCG_EDGES)
        pruned, removed = prune(g, {6})
        assert pruned.edge_pairs() == [
            (0, 6), (1, 6), (2, 6), (3, 6), (4, 6), (5, 6), (6, 7)
        ]
        assert len(removed) == 7


class TestStructureSearch:
    def test_k7_single_edge(self):
        found = search_media_structures(7, 6)
        assert found.n == 2
        assert len(found.structures) == 1
        assert found.structures[0].edge_pairs() == [(0, 1)]

    def test_k_at_degree_needs_no_split(self):
        with pytest.raises(ValueError):
            search_media_structures(6, 6)

    def test_k13_path_of_three(self):
        # brute feasibility: n=2 capacity 12-2e < 13 for any e >= 1;
        # n=3 needs e=2 (2e+13 <= 18), the path
        found = search_media_structures(13, 6)
        assert found.n == 3
        assert [g.edge_pairs() for g in found.structures] == [[(0, 1), (0, 2)]]

    def test_feasibility_against_brute_force_table(self):
        for k in range(7, 30):
            found = search_media_structures(k, 6)
            brute_n = None
            for n in range(2, 40):
                if any(6 * n - 2 * e >= k for e in range(n - 1, n * (n - 1) // 2 + 1)):
                    brute_n = n
                    break
            assert found.n == brute_n, k
            for g in found.structures:
                assert 6 * g.n - 2 * g.n_edges >= k
                assert max(g.degrees()) <= 6
                assert all(d >= 0 for row in g.distance_matrix() for d in row)

    def test_large_k_constructive_family(self):
        found = search_media_structures(63, 6)
        assert found.n == 16
        for g in found.structures:
            assert 6 * 16 - 2 * g.n_edges >= 63
            assert is_planar(g)

    def test_results_cached(self):
        a = search_media_structures(9, 6)
        b = search_media_structures(9, 6)
        assert a is b


class TestAllocate:
    def path3(self):
        return CouplingGraph(3, [(0, 1), (1, 2)])

    def test_single_neighbor_lands_on_freest_vertex(self):
        groups = allocate(self.path3(), np.array([5.0]), np.zeros((1, 1)), 6)
        assert groups == [[0], [], []]  # end vertexes have 5 slots, middle 4
        assert score_allocation(self.path3(), groups, np.zeros((1, 1))) == 0.0

    def test_greedy_trace_matches_independent_reimplementation(self):
        rng = np.random.default_rng(5)
        structure = self.path3()
        for trial in range(40):
            k = 5
            pw = rng.integers(0, 8, size=(k, k)).astype(float)
            pw = (pw + pw.T) / 2
            np.fill_diagonal(pw, 0)
            rs = pw.sum(axis=1) + rng.integers(0, 4, size=k)
            groups = allocate(structure, rs, pw, 6)
            steps = greedy_allocation_trace(
                3, [(0, 1), (1, 2)], rs.tolist(),
                pw.tolist(), 6,
            )
            want = [[], [], []]
            for m, loc in steps:
                want[loc].append(m)
            assert groups == want, trial

    def test_greedy_f_bounded_below_by_exhaustive_minimum(self):
        rng = np.random.default_rng(9)
        structure = self.path3()
        edges = [(0, 1), (1, 2)]
        for trial in range(25):
            k = 5
            pw = rng.integers(0, 9, size=(k, k)).astype(float)
            pw = (pw + pw.T) / 2
            np.fill_diagonal(pw, 0)
            rs = pw.sum(axis=1)
            groups = allocate(structure, rs, pw, 6)
            got = score_allocation(structure, groups, pw)
            assert abs(got - allocation_f(3, edges, groups, pw.tolist())) < 1e-9
            best = exhaustive_min_allocation_f(3, edges, k, pw.tolist(), 6)
            assert got >= best - 1e-9, trial

    def test_capacity_invariant(self):
        rng = np.random.default_rng(17)
        found = search_media_structures(11, 6)
        for structure in found.structures:
            k = 11
            pw = rng.random((k, k))
            pw = (pw + pw.T) / 2
            np.fill_diagonal(pw, 0)
            groups = allocate(structure, pw.sum(axis=1), pw, 6)
            for i, members in enumerate(groups):
                assert structure.degree(i) + len(members) <= 6

    def test_overflow_raises(self):
        lone = CouplingGraph(1, [])
        with pytest.raises(AllocationError):
            allocate(lone, np.ones(7), np.zeros((7, 7)), 6)


class TestScoreAllocation:
    def test_all_on_one_vertex_scores_zero(self):
        g = CouplingGraph(2, [(0, 1)])
        pw = np.array([[0.0, 3.0], [3.0, 0.0]])
        assert score_allocation(g, [[0, 1], []], pw) == 0.0

    def test_adjacent_pair_counts_twice(self):
        g = CouplingGraph(2, [(0, 1)])
        pw = np.array([[0.0, 3.0], [3.0, 0.0]])
        assert score_allocation(g, [[0], [1]], pw) == 6.0

    def test_relabel_invariance(self):
        rng = np.random.default_rng(23)
        edges = [(0, 1), (0, 2)]
        relabeled = [(2, 1), (2, 0)]  # vertex swap 0<->2
        k = 6
        pw = rng.random((k, k))
        pw = (pw + pw.T) / 2
        np.fill_diagonal(pw, 0)
        groups = [[0, 3], [1, 4], [2, 5]]
        transported = [groups[2], groups[1], groups[0]]
        a = score_allocation(CouplingGraph(3, edges), groups, pw)
        b = score_allocation(CouplingGraph(3, relabeled), transported, pw)
        assert abs(a - b) < 1e-12


class TestSplit:
    def star(self, k):
        return CouplingGraph(k + 1, [(0, i, 1) for i in range(1, k + 1)])

    def test_degree_seven_equal_weights_f_matches_exhaustive(self):
        g = self.star(7)
        I = np.zeros((8, 8))
        for u, v, w in g.edges():
            I[u, v] = I[v, u] = w
        work, rec = split_media_vertex(g, 0, I, list(range(8)), D6)
        pw = np.zeros((7, 7))  # neighbors share no affinity
        best = exhaustive_min_allocation_f(2, [(0, 1)], 7, pw.tolist(), 6)
        assert rec.f_score == best == 0.0
        assert check_constraints(work, D6).ok

    def test_random_degree_nine_minimizes_f_over_two_vertex_structures(self):
        rng = np.random.default_rng(31)
        for trial in range(10):
            n = 10
            hub = 0
            edges = [(hub, i, float(rng.integers(1, 9))) for i in range(1, n)]
            g = CouplingGraph(n, edges)
            I = np.zeros((n, n))
            for u, v, w in g.edges():
                I[u, v] = I[v, u] = w
            # neighbor cross-affinities drive the grouping
            extra = rng.integers(0, 5, size=(n, n)).astype(float)
            extra = (extra + extra.T) / 2
            I[1:, 1:] = extra[1:, 1:]
            np.fill_diagonal(I, 0)
            work, rec = split_media_vertex(g, hub, I, list(range(n)), D6)
            assert check_constraints(work, D6).ok
            neighbors = sorted(g.neighbors(hub))
            pw = I[np.ix_(neighbors, neighbors)]
            # k=9 admits exactly one two-vertex structure (the edge), so
            # the chosen F must equal the independent greedy's F there,
            # and the true assignment optimum bounds it from below
            rs = I[neighbors].sum(axis=1)
            steps = greedy_allocation_trace(
                2, [(0, 1)], rs.tolist(), pw.tolist(), 6
            )
            groups = [[], []]
            for m, loc in steps:
                groups[loc].append(m)
            assert abs(
                rec.f_score - allocation_f(2, [(0, 1)], groups, pw.tolist())
            ) < 1e-9, trial
            best = exhaustive_min_allocation_f(
                2, [(0, 1)], len(neighbors), pw.tolist(), 6
            )
            assert rec.f_score >= best - 1e-9, trial

    def test_hub_split_structure_and_alloc(self):
        g = CouplingGraph(HUB_N, HUB_CCG_EDGES)
        pruned, _ = prune(g, {6})
        I = 0.5 * np.zeros((8, 8))
        for u, v, w in g.edges():
            I[u, v] = I[v, u] = 0.5 * w
        work, rec = split_media_vertex(pruned, 6, I, list(range(8)), D6)
        assert rec.vertex == 6
        assert rec.ancillas == (8,)
        groups = {6: set(), 8: set()}
        for vert, members in rec.alloc.items():
            groups[vert] = set(members)
        assert groups[6] == {5, 0, 3, 7, 4}
        assert groups[8] == {1, 2}
        assert rec.home == 6

    def test_swapping_members_across_groups_worsens_f(self):
        g = CouplingGraph(HUB_N, HUB_CCG_EDGES)
        I = np.zeros((8, 8))
        for u, v, w in g.edges():
            I[u, v] = I[v, u] = 0.5 * w
        neighbors = sorted(g.neighbors(6))  # [0,1,2,3,4,5,7]
        pw = I[np.ix_(neighbors, neighbors)]
        pos = {q: i for i, q in enumerate(neighbors)}
        chosen = [[pos[q] for q in (5, 0, 3, 7, 4)], [pos[q] for q in (1, 2)]]
        swapped = [[pos[q] for q in (5, 0, 3, 7, 1)], [pos[q] for q in (4, 2)]]
        edge = CouplingGraph(2, [(0, 1)])
        assert score_allocation(edge, chosen, pw) < score_allocation(
            edge, swapped, pw
        )


class TestRecover:
    def test_empty_set_is_identity(self):
        g = CouplingGraph(4, [(0, 1, 2), (1, 2, 1)])
        out, decisions = recover(g, [], {v: v for v in range(4)}, D6)
        assert out.edges() == g.edges() and decisions == []

    def test_per_edge_constraint_replay(self):
        rng = random.Random(41)
        for trial in range(25):
            n = rng.randrange(5, 9)
            base_edges = [(i, i + 1, 1.0) for i in range(n - 1)]
            base = CouplingGraph(n, base_edges)
            pool = [
                (i, j, float(rng.randrange(1, 9)))
                for i in range(n) for j in range(i + 1, n)
                if not base.has_edge(i, j) and rng.random() < 0.8
            ]
            out, decisions = recover(base, pool, {v: v for v in range(n)}, D6)
            # replay: decisions in weight-descending order, each kept edge
            # must satisfy the constraints against the growing graph
            assert [(-w, u, v) for u, v, w, _ in decisions] == sorted(
                (-w, u, v) for u, v, w in pool
            )
            grown = list(base.edge_pairs())
            deg = base.degrees()
            for u, v, w, kept in decisions:
                would = grown + [(u, v)]
                legal = (
                    not CouplingGraph(n, grown).has_edge(u, v)
                    and deg[u] < 6 and deg[v] < 6
                    and planar_by_kuratowski(n, would)
                )
                assert kept == legal, (trial, u, v)
                if kept:
                    grown = would
                    deg[u] += 1
                    deg[v] += 1
            assert sorted(grown) == out.edge_pairs()

    def test_monotone_growth(self):
        g = CouplingGraph(5, [(0, 1, 3)])
        pool = [(1, 2, 2.0), (3, 4, 9.0), (0, 1, 5.0)]
        out, _ = recover(g, pool, {v: v for v in range(5)}, D6)
        assert set(out.edge_pairs()) >= set(g.edge_pairs())
        assert out.total_weight() >= g.total_weight()


class TestDesign:
    def hub_graph(self):
        return CouplingGraph(HUB_N, HUB_CCG_EDGES)

    def test_worked_hub_example_end_to_end(self):
        res = design(self.hub_graph(), keep_audit=True)
        assert res.ranking == (6, 7, 5, 3, 0, 4, 2, 1)
        assert res.media_count == 1
        assert res.ancilla_count == 1
        assert res.pcg.edge_pairs() == [
            (0, 3), (0, 6), (0, 7), (1, 8), (2, 8), (3, 5), (3, 6), (3, 7),
            (4, 6), (4, 7), (5, 6), (5, 7), (6, 7), (6, 8),
        ]
        assert check_constraints(res.pcg, D6).ok
        # audit keeps the per-media-count prune snapshots
        assert res.audit["per_n"][1]["pruned_edges"] == [
            [0, 6], [1, 6], [2, 6], [3, 6], [4, 6], [5, 6], [6, 7]
        ]
        assert [6, 7] in res.audit["per_n"][2]["pruned_edges"]
        assert len(res.audit["per_n"][2]["pruned_edges"]) == 11

    def test_path_ccg_is_returned_unchanged(self):
        path = CouplingGraph(6, [(i, i + 1, 2) for i in range(5)])
        res = design(path)
        assert res.pcg.edge_pairs() == path.edge_pairs()
        assert res.ancilla_count == 0
        assert res.score == path.total_weight()

    def test_legit_ccg_keeps_all_edges_and_minimal_score(self):
        # planar, degree <= 6: a wheel on 6 outer vertexes
        edges = [(0, i, 1) for i in range(1, 7)]
        edges += [(i, i % 6 + 1, 1) for i in range(1, 7)]
        wheel = CouplingGraph(7, edges)
        res = design(wheel)
        assert set(res.pcg.edge_pairs()) >= set(wheel.edge_pairs())
        assert res.score == wheel.total_weight()

    def test_no_invented_edges_between_original_qubits(self):
        rng = random.Random(51)
        for trial in range(8):
            g = random_ccg(rng, 10)
            if g.n_edges == 0:
                continue
            res = design(g)
            ccg_pairs = set(g.edge_pairs())
            for u, v in res.pcg.edge_pairs():
                if u < g.n and v < g.n:
                    assert (u, v) in ccg_pairs, trial

    def test_twelve_qubit_circuit_invariants_and_audit_replay(self):
        circ = generate_random_circuit(RandomCircuitSpec(12, 60, 0.8, seed=77))
        a = design(circ, keep_audit=True)
        b = design(circ, keep_audit=True)
        assert a.pcg == b.pcg
        assert a.placement == b.placement
        assert a.audit == b.audit
        assert check_constraints(a.pcg, D6).ok
        placed = [a.placement[q] for q in range(12)]
        assert len(set(placed)) == 12
        rebuilt = CouplingGraph(
            a.pcg.n, [tuple(e) for e in a.audit["final_edges"]]
        )
        assert rebuilt == a.pcg
        assert [[q, a.placement[q]] for q in sorted(a.placement)] == \
            a.audit["placement"]

    def test_circuit_and_matrix_paths_agree_on_hub(self):
        from_matrix = design(self.hub_graph())
        from_circuit = design(hub_circuit())
        assert from_circuit.pcg.edge_pairs() == from_matrix.pcg.edge_pairs()
        assert from_circuit.ranking == from_matrix.ranking

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            design(self.hub_graph(), alpha=2.0)
