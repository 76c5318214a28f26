import pytest

from approxch.contraction import DEFAULT_LIMITS
from approxch.graph import ContractionGraph, generate_random_graph
from approxch.ordering import (
    NodePriority, compute_order, is_permutation, node_priority, simulate_contraction,
)


def snapshot(g):
    return sorted(e.astuple() for e in g.edges())


def bidirected_triangle():
    return ContractionGraph.from_edges(
        3, [(a, b, 1.0) for a in range(3) for b in range(3) if a != b])


class TestSimulate:
    def test_path_middle(self):
        for eps in (0.0, 0.3):
            g = ContractionGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
            assert simulate_contraction(g, 1, eps) == 1

    def test_triangle_is_witnessed(self):
        g = bidirected_triangle()
        assert simulate_contraction(g, 0, 0.0) == 0

    def test_isolated(self):
        assert simulate_contraction(ContractionGraph(3), 2, 0.0) == 0

    def test_no_mutation(self):
        g = generate_random_graph(30, 120, (1, 50), 2)
        before = snapshot(g)
        for u in range(30):
            simulate_contraction(g, u, 0.2)
        assert snapshot(g) == before

    def test_bounds_contract_node(self):
        # shortcuts inserted earlier in the same contraction can serve as witnesses
        from approxch.contraction import contract_node

        g = generate_random_graph(30, 120, (1, 50), 4)
        for u in range(30):
            predicted = simulate_contraction(g, u, 0.0)
            assert len(contract_node(g.copy(), u, 0.0)) <= predicted


class TestPriority:
    def test_composite(self):
        p = NodePriority(edge_difference=-2, contracted_neighbors=3)
        assert p.composite == 1.0

    def test_directed_path(self):
        g = ContractionGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
        prios = [node_priority(g, u, 0.0, DEFAULT_LIMITS, 0).edge_difference for u in range(4)]
        # interior: 1 shortcut - 2 edges; endpoints: 0 shortcuts - 1 edge
        assert prios == [-1, -1, -1, -1]


class TestComputeOrder:
    def test_path_starts_at_node_zero(self):
        g = ContractionGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
        rank = compute_order(g, 0.0)
        assert rank[0] == 0
        assert is_permutation(rank)

    def test_single_node(self):
        assert compute_order(ContractionGraph(1), 0.0) == [0]

    @pytest.mark.parametrize("seed", range(5))
    def test_permutation_and_deterministic(self, seed):
        g = generate_random_graph(60, 240, (1, 100), seed)
        a = compute_order(g.copy(), 0.1)
        b = compute_order(g.copy(), 0.1)
        assert is_permutation(a)
        assert a == b

    def test_consumes_graph(self):
        g = generate_random_graph(20, 60, (1, 10), 0)
        compute_order(g, 0.0)
        assert not any(g.alive) and g.edge_count == 0

    def test_custom_contract_callback(self):
        g = generate_random_graph(20, 60, (1, 10), 0)
        calls = []

        def contract(u):
            calls.append(u)
            g.remove_node(u)

        rank = compute_order(g, 0.0, contract=contract)
        assert sorted(calls, key=rank.__getitem__) == calls
        assert [rank[u] for u in calls] == list(range(20))
