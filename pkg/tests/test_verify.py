import json

import networkx as nx
import pytest

from approxch.graph import INF, ContractionGraph, generate_random_graph
from approxch.hierarchy import Hierarchy, build_hierarchy
from approxch.query import UP, QueryContext, stall_test
from approxch.search_graph import build_search_graph
from approxch.verify import (
    ErrorStats, ReachabilityMismatch, build_stall_example, dijkstra_oracle, stall_example_conditions,
    verify_pairs, within_bound,
)


class TestOracle:
    def test_same_node(self):
        assert dijkstra_oracle(ContractionGraph(3), 1, 1) == 0

    def test_single_edge(self):
        assert dijkstra_oracle(ContractionGraph.from_edges(2, [(0, 1, 5)]), 0, 1) == 5

    def test_cycle_antipodal(self):
        g = ContractionGraph.from_edges(4, [(i, (i + 1) % 4, 1) for i in range(4)])
        assert dijkstra_oracle(g, 0, 2) == 2

    def test_unreachable(self):
        assert dijkstra_oracle(ContractionGraph.from_edges(2, [(0, 1, 5)]), 1, 0) == INF

    @pytest.mark.parametrize("seed", range(3))
    def test_agrees_with_networkx(self, seed):
        g = generate_random_graph(60, 200, (1, 100), seed)
        nxg = nx.DiGraph()
        nxg.add_nodes_from(range(60))
        nxg.add_weighted_edges_from((e.tail, e.head, e.c) for e in g.edges())
        for s in range(0, 60, 7):
            lengths = nx.single_source_dijkstra_path_length(nxg, s)
            for t in range(60):
                assert dijkstra_oracle(g, s, t) == lengths.get(t, INF)


class TestVerifyPairs:
    @pytest.mark.parametrize("stalling", [False, True])
    def test_exact(self, stalling):
        g = generate_random_graph(100, 400, (1, 1000), 1)
        stats = verify_pairs(g, build_hierarchy(g, 0.0), 300, 4, use_stalling=stalling)
        assert stats.pairs == 300 and stats.reachable > 0
        assert stats.violations == 0 and stats.max_ratio <= 1 + 1e-9

    @pytest.mark.parametrize("stalling", [False, True])
    def test_heuristic(self, stalling):
        g = generate_random_graph(100, 400, (1, 1000), 2)
        stats = verify_pairs(g, build_hierarchy(g, 0.1), 300, 4, use_stalling=stalling)
        assert stats.violations == 0 and 1 - 1e-9 <= stats.max_ratio <= 1.1 + 1e-9
        assert 1 - 1e-9 <= stats.mean_ratio <= stats.max_ratio

    def test_zero_pairs(self):
        g = generate_random_graph(10, 20, (1, 10), 0)
        stats = verify_pairs(g, build_hierarchy(g, 0.0), 0, 0)
        assert (stats.pairs, stats.reachable, stats.violations) == (0, 0, 0)

    def test_deterministic(self):
        g = generate_random_graph(80, 300, (1, 100), 3)
        h = build_hierarchy(g, 0.3)
        assert verify_pairs(g, h, 100, 9) == verify_pairs(g, h, 100, 9)

    def test_detects_violation(self):
        g = ContractionGraph.from_edges(2, [(0, 1, 10)])
        h = build_hierarchy(g, 0.0)
        h.edges[0].c = 20.0
        stats = verify_pairs(g, h, 50, 0)
        assert stats.violations > 0 and stats.max_ratio == 2.0

    def test_reachability_mismatch_is_fatal(self):
        g = ContractionGraph.from_edges(2, [(0, 1, 10)])
        empty = Hierarchy(2, [0, 1], [], 0.0)
        with pytest.raises(ReachabilityMismatch):
            verify_pairs(g, empty, 50, 0)

    def test_records(self):
        stats = ErrorStats(pairs=3, reachable=2, max_ratio=1.05, mean_ratio=1.02, epsilon=0.1)
        assert "violations=0" in stats.as_text()
        record = json.loads(stats.as_json())
        assert record["record"] == "verify" and record["max_ratio"] == 1.05

    def test_within_bound(self):
        assert within_bound(11.0, 10.0, 0.1)
        assert not within_bound(11.01, 10.0, 0.1)
        assert not within_bound(9.99, 10.0, 0.1)
        assert within_bound(0.0, 0.0, 0.0)


class TestStallExample:
    @pytest.mark.parametrize("eps", [0.01, 0.1, 0.5])
    def test_conditions_hold(self, eps):
        fig = build_stall_example(eps)
        assert stall_example_conditions(fig.weights, eps) == {"a": True, "b": True, "c": True}

    def test_rejects_zero_epsilon(self):
        with pytest.raises(ValueError):
            build_stall_example(0.0)

    def test_stall_tests_at_u(self):
        fig = build_stall_example(0.1)
        w = fig.weights
        assert stall_test(w["sx"], w["xu"], w["su"], 0.0)
        assert not stall_test(w["sx"], w["xu"], w["su"], 0.1)

    def test_contraction_keeps_witness(self):
        fig = build_stall_example(0.1)
        h = build_hierarchy(fig.graph, 0.1, order=fig.rank)
        nd = fig.nodes
        assert h.shortcut_count == 0
        assert (nd["x"], nd["v"]) not in h.edge_index
        assert h.edge_index[(nd["x"], nd["y"])].c_tilde < h.edge_index[(nd["x"], nd["y"])].c

    @pytest.mark.parametrize("stalling", [False, True])
    def test_forward_settle_order(self, stalling):
        fig = build_stall_example(0.1)
        h = build_hierarchy(fig.graph, 0.1, order=fig.rank)
        ctx = QueryContext(build_search_graph(h))
        ctx.trace = []
        nd = fig.nodes
        ctx.run(nd["s"], nd["z"], stalling=stalling, epsilon=0.1)
        names = {i: name for name, i in nd.items()}
        forward = [names[u] for r, _, u in ctx.trace if r == UP]
        assert forward == ["s", "x", "y", "u", "v", "z"]

    def test_query_within_bound(self):
        fig = build_stall_example(0.1)
        h = build_hierarchy(fig.graph, 0.1, order=fig.rank)
        sg = build_search_graph(h)
        nd = fig.nodes
        exact = dijkstra_oracle(fig.graph, nd["s"], nd["z"])
        for stalling in (False, True):
            d = QueryContext(sg).run(nd["s"], nd["z"], stalling=stalling, epsilon=0.1).distance
            assert exact <= d <= 1.1 * exact

    def test_only_exact_stalling_prunes_u(self):
        fig = build_stall_example(0.1)
        h = build_hierarchy(fig.graph, 0.1, order=fig.rank)
        ctx = QueryContext(build_search_graph(h))
        s, z = fig.nodes["s"], fig.nodes["z"]
        assert ctx.run(s, z, stalling=True, epsilon=0.0).stalled == 1
        assert ctx.run(s, z, stalling=True, epsilon=0.1).stalled == 0
