"""Bidirectional upward/downward queries, with optional (1+eps)-relaxed stall-on-demand."""
from __future__ import annotations

import bisect
import heapq
from dataclasses import dataclass, field
from typing import NamedTuple

from .graph import INF
from .hierarchy import Hierarchy, unpack_path
from .search_graph import SearchGraph

UP = 0
DOWN = 1


class PackedEdge(NamedTuple):
    """Hierarchy edge in original direction, as found by a query."""

    tail: int
    head: int
    c: float


@dataclass
class QueryResult:
    distance: float
    meeting: int | None = None
    packed_path: list[PackedEdge] | None = None
    settled: int = 0
    relaxed: int = 0
    stalled: int = 0

    @property
    def reachable(self) -> bool:
        return self.distance < INF


@dataclass
class _Side:
    """Dense per-direction state; entries are valid only where ``stamp == version``."""

    dist: list[float]
    parent: list[int]
    stalled: list[bool]
    stall_dist: list[float]
    stamp: list[int]
    heap: list = field(default_factory=list)


def stall_test(d_candidate: float, edge_c: float, d_current: float, epsilon: float) -> bool:
    """True iff reaching the node via the candidate neighbor beats its current distance."""
    return d_candidate + (1.0 + epsilon) * edge_c < d_current


class QueryContext:
    """Reusable scratch space for queries on one search graph.

    Not safe for concurrent use; give every thread its own context.
    """

    def __init__(self, sg: SearchGraph):
        self.sg = sg
        n = sg.node_count
        self.sides = tuple(
            _Side([INF] * n, [-1] * n, [False] * n, [INF] * n, [0] * n) for _ in range(2)
        )
        self.version = 0
        # (direction, key, node) per settle when set to a list
        self.trace: list[tuple[int, float, int]] | None = None

    def _touch(self, side: _Side, v: int) -> None:
        if side.stamp[v] != self.version:
            side.stamp[v] = self.version
            side.dist[v] = INF
            side.parent[v] = -1
            side.stalled[v] = False

    def _dist(self, side: _Side, v: int) -> float:
        return side.dist[v] if side.stamp[v] == self.version else INF

    def _clean(self, side: _Side) -> float:
        heap = side.heap
        while heap and heap[0][0] > side.dist[heap[0][1]]:
            heapq.heappop(heap)
        return heap[0][0] if heap else INF

    def run(self, s: int, t: int, stalling: bool = False, epsilon: float = 0.0) -> QueryResult:
        sg = self.sg
        n = sg.node_count
        for node in (s, t):
            if not 0 <= node < n:
                raise ValueError(f"node {node} out of range [0, {n})")
        if stalling and epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        self.version += 1
        sides = self.sides
        for side, root in zip(sides, (s, t)):
            side.heap = [(0.0, root)]
            self._touch(side, root)
            side.dist[root] = 0.0

        first, other, cost = sg.first, sg.other, sg.cost
        flags = (sg.up, sg.down)
        factor = 1.0 + epsilon
        d = INF
        meeting = None
        settled = relaxed = stalled_count = 0
        r = UP
        trace = self.trace

        while True:
            min_up = self._clean(sides[UP])
            min_down = self._clean(sides[DOWN])
            if not (sides[UP].heap or sides[DOWN].heap) or d <= min(min_up, min_down):
                break
            if sides[1 - r].heap:
                r = 1 - r
            side = sides[r]
            opposite_flag = flags[1 - r]
            own_flag = flags[r]
            key, u = heapq.heappop(side.heap)
            settled += 1
            if trace is not None:
                trace.append((r, key, u))
            through = self._dist(sides[UP], u) + self._dist(sides[DOWN], u)
            if through < d:
                d = through
                meeting = u
            if stalling and side.stalled[u]:
                continue
            du = side.dist[u]
            for i in range(first[u], first[u + 1]):
                v = other[i]
                c = cost[i]
                if own_flag[i]:
                    nd = du + c
                    if nd < self._dist(side, v):
                        self._touch(side, v)
                        side.dist[v] = nd
                        side.parent[v] = i
                        heapq.heappush(side.heap, (nd, v))
                        relaxed += 1
                        if side.stalled[v]:
                            side.stalled[v] = False
                if stalling and opposite_flag[i]:
                    dv = self._dist(side, v)
                    if dv + factor * c < du:
                        side.stalled[u] = True
                        side.stall_dist[u] = dv + factor * c
                        stalled_count += 1
                        break

        result = QueryResult(d, meeting, settled=settled, relaxed=relaxed, stalled=stalled_count)
        if meeting is not None:
            result.packed_path = self._packed_path(s, t, meeting)
        return result

    def _packed_path(self, s: int, t: int, meeting: int) -> list[PackedEdge]:
        sg = self.sg
        up_side, down_side = self.sides
        forward = []
        x = meeting
        while x != s:
            i = up_side.parent[x]
            owner = _owner(sg, i)
            forward.append(PackedEdge(owner, x, sg.cost[i]))
            x = owner
        forward.reverse()
        x = meeting
        while x != t:
            i = down_side.parent[x]
            owner = _owner(sg, i)
            forward.append(PackedEdge(x, owner, sg.cost[i]))
            x = owner
        return forward


def _owner(sg: SearchGraph, i: int) -> int:
    return bisect.bisect_right(sg.first, i) - 1


def query_basic(sg: SearchGraph, s: int, t: int, ctx: QueryContext | None = None) -> QueryResult:
    return (ctx or QueryContext(sg)).run(s, t)


def query_stalling(sg: SearchGraph, s: int, t: int, epsilon: float,
                   ctx: QueryContext | None = None) -> QueryResult:
    """Query with stall-on-demand; ``epsilon`` must match the one used in preprocessing."""
    return (ctx or QueryContext(sg)).run(s, t, stalling=True, epsilon=epsilon)


def retrieve_path(result: QueryResult, h: Hierarchy) -> list[int]:
    """Original-graph node sequence of a finished query."""
    if not result.reachable or result.packed_path is None:
        raise ValueError("no path: target unreachable")
    if not result.packed_path:
        return [result.meeting]
    return unpack_path(h, result.packed_path)
