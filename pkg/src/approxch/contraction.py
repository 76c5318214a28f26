"""Witness search and node contraction with witness-memory weights."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .graph import INF, ContractionGraph, Edge


@dataclass(frozen=True)
class WitnessLimits:
    """Bounds on a single witness search. Hitting one means "no witness"."""

    max_settled: int = 500
    max_hops: int = 16

    def __post_init__(self):
        if self.max_settled < 1 or self.max_hops < 1:
            raise ValueError("witness limits must be >= 1")


DEFAULT_LIMITS = WitnessLimits()


@dataclass
class WitnessPath:
    nodes: list[int]
    edges: list[Edge] = field(repr=False)
    cost: float


def witness_search(g: ContractionGraph, v: int, targets, excluded: int,
                   budget: dict[int, float], limits: WitnessLimits = DEFAULT_LIMITS
                   ) -> dict[int, WitnessPath | None]:
    """One-to-many Dijkstra from ``v`` that never enters ``excluded``.

    A target gets a path when it is settled at a cost within its budget.
    Targets still open when a limit is hit, or whose budget is below the
    queue minimum, map to ``None``.
    """
    result: dict[int, WitnessPath | None] = {w: None for w in targets}
    pending = set(result)
    if not pending:
        return result
    dist = {v: 0.0}
    hops = {v: 0}
    parent: dict[int, Edge] = {}
    heap = [(0.0, v)]
    max_budget = max(budget[w] for w in pending)
    out_adj = g.out_adj
    max_hops = limits.max_hops
    settle_budget = limits.max_settled

    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        if d > max_budget:
            break
        settle_budget -= 1
        if x in pending:
            pending.discard(x)
            if d <= budget[x]:
                result[x] = _trace(v, x, d, parent)
            if not pending:
                break
            max_budget = max(budget[w] for w in pending)
        if settle_budget <= 0:
            break
        h = hops[x] + 1
        if h > max_hops:
            continue
        for y, e in out_adj[x].items():
            nd = d + e.c
            # no witness can use a prefix already over every open budget
            if nd > max_budget or y == excluded:
                continue
            if nd < dist.get(y, INF):
                dist[y] = nd
                hops[y] = h
                parent[y] = e
                heapq.heappush(heap, (nd, y))
    return result


def _trace(source: int, target: int, cost: float, parent: dict[int, Edge]) -> WitnessPath:
    edges = []
    x = target
    while x != source:
        e = parent[x]
        edges.append(e)
        x = e.tail
    edges.reverse()
    nodes = [source] + [e.head for e in edges]
    return WitnessPath(nodes, edges, cost)


def apply_witness_memory(g: ContractionGraph, path: WitnessPath, gamma: float) -> None:
    """Spread the witness excess ``gamma`` proportionally over the witness edges."""
    if gamma <= -1.0:
        # zero-cost witness: c / (1 + gamma) is unbounded, nothing to lower
        return
    scale = 1.0 + gamma
    for e in path.edges:
        lowered = e.c / scale
        if lowered < e.c_tilde:
            e.c_tilde = lowered


def contract_node(g: ContractionGraph, u: int, epsilon: float,
                  limits: WitnessLimits = DEFAULT_LIMITS, observer=None) -> list[Edge]:
    """Contract ``u``: add shortcuts for unwitnessed neighbor pairs, then remove it.

    Returns the shortcuts as created, before any merge or later memory update.

    ``epsilon == 0`` gives the exact construction. ``observer``, if given, is
    called as ``observer(v, w, path, gamma)`` for every witnessed pair before
    its memory update.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    g._check_alive(u)
    ins = sorted(g.in_adj[u].items())
    outs = sorted(g.out_adj[u].items())
    factor = 1.0 + epsilon
    added = []
    for v, e_in in ins:
        targets = [w for w, _ in outs if w != v]
        if not targets:
            continue
        memory = {w: e_in.c_tilde + e_out.c_tilde for w, e_out in outs if w != v}
        budget = {w: factor * memory[w] for w in targets}
        found = witness_search(g, v, targets, u, budget, limits)
        for w, e_out in outs:
            if w == v:
                continue
            path = found[w]
            if path is None:
                shortcut = Edge(v, w, e_in.c + e_out.c, memory[w], middle=u)
                g.add_or_merge_edge(shortcut)
                # snapshot: the stored edge may be merged or lowered later
                added.append(Edge(*shortcut.astuple()))
                continue
            if memory[w] <= 0.0:
                # both c_tilde are zero, hence c and the witness cost are zero too
                continue
            # rounding may push the ratio a hair past epsilon
            gamma = min(path.cost / memory[w] - 1.0, epsilon)
            if observer is not None:
                observer(v, w, path, gamma)
            apply_witness_memory(g, path, gamma)
    g.remove_node(u)
    return added

