"""Greedy node ordering by edge difference, interleaved with contraction."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

from .contraction import DEFAULT_LIMITS, WitnessLimits, contract_node, witness_search
from .graph import ContractionGraph, GraphError


@dataclass(frozen=True)
class NodePriority:
    edge_difference: int
    contracted_neighbors: int

    @property
    def composite(self) -> float:
        return float(self.edge_difference + self.contracted_neighbors)


def simulate_contraction(g: ContractionGraph, u: int, epsilon: float,
                         limits: WitnessLimits = DEFAULT_LIMITS) -> int:
    """Count the shortcuts contracting ``u`` would add. Leaves ``g`` untouched."""
    if not g.alive[u]:
        raise GraphError(f"node {u} has been contracted")
    outs = g.out_adj[u]
    factor = 1.0 + epsilon
    total = 0
    for v, e_in in g.in_adj[u].items():
        budget = {w: factor * (e_in.c_tilde + e_out.c_tilde) for w, e_out in outs.items() if w != v}
        if budget:
            found = witness_search(g, v, budget, u, budget, limits)
            total += sum(1 for path in found.values() if path is None)
    return total


def node_priority(g: ContractionGraph, u: int, epsilon: float, limits: WitnessLimits,
                  contracted_neighbors: int) -> NodePriority:
    shortcuts = simulate_contraction(g, u, epsilon, limits)
    return NodePriority(shortcuts - g.degree(u), contracted_neighbors)


def is_permutation(rank) -> bool:
    return sorted(rank) == list(range(len(rank)))


def compute_order(g: ContractionGraph, epsilon: float, limits: WitnessLimits = DEFAULT_LIMITS,
                  contract: Callable[[int], object] | None = None) -> list[int]:
    """Contract every node of ``g`` greedily and return ``rank`` (0 = contracted first).

    ``g`` is consumed. Priorities are re-evaluated lazily when popped; a node
    whose fresh priority still beats the rest of the queue is contracted, ties
    going to the smaller id. ``contract(u)`` replaces the default
    ``contract_node`` call, e.g. to record edges before removal.
    """
    if contract is None:
        def contract(u):
            return contract_node(g, u, epsilon, limits)

    n = g.node_count
    if not all(g.alive):
        raise GraphError("compute_order needs a graph with every node alive")
    contracted_nb = [0] * n
    heap = [(node_priority(g, u, epsilon, limits, 0).composite, u) for u in range(n)]
    heapq.heapify(heap)
    rank = [-1] * n
    next_rank = 0

    while heap:
        _, u = heapq.heappop(heap)
        fresh = node_priority(g, u, epsilon, limits, contracted_nb[u]).composite
        if heap and (fresh, u) > heap[0]:
            heapq.heappush(heap, (fresh, u))
            continue
        neighbors = set(g.out_adj[u]) | set(g.in_adj[u])
        contract(u)
        for x in neighbors:
            contracted_nb[x] += 1
        rank[u] = next_rank
        next_rank += 1
    return rank
