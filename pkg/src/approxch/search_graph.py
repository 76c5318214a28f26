"""Query-time adjacency array holding the upward and reversed downward edges."""
from __future__ import annotations

from dataclasses import dataclass

from .hierarchy import Hierarchy, HierarchyCorruptError


@dataclass(eq=False)
class SearchGraph:
    """Edges live in the group of their lower-ranked endpoint ``owner``.

    Record ``i`` of ``owner`` spans ``first[owner] <= i < first[owner + 1]``.
    ``up[i]`` marks an original edge ``owner -> other[i]``; ``down[i]`` marks an
    original edge ``other[i] -> owner``. A record may carry both flags.
    """

    node_count: int
    rank: list[int]
    first: list[int]
    other: list[int]
    cost: list[float]
    up: list[bool]
    down: list[bool]
    middle: list[int | None]

    def records(self, owner: int) -> range:
        return range(self.first[owner], self.first[owner + 1])

    @property
    def record_count(self) -> int:
        return len(self.other)

    def original_edges(self) -> set[tuple[int, int, float]]:
        """Recover ``(tail, head, c)`` of every original-direction edge from the flags."""
        result = set()
        for owner in range(self.node_count):
            for i in self.records(owner):
                if self.up[i]:
                    result.add((owner, self.other[i], self.cost[i]))
                if self.down[i]:
                    result.add((self.other[i], owner, self.cost[i]))
        return result


def build_search_graph(h: Hierarchy) -> SearchGraph:
    rank = h.rank
    groups: list[dict[int, list]] = [{} for _ in range(h.node_count)]
    for e in h.edges:
        a, b = e.tail, e.head
        if rank[a] == rank[b]:
            raise HierarchyCorruptError(f"nodes {a} and {b} share rank {rank[a]}")
        if rank[a] < rank[b]:
            owner, other, is_up = a, b, True
        else:
            owner, other, is_up = b, a, False
        groups[owner].setdefault(other, []).append((e.c, is_up, e.middle))

    first = [0]
    other_l, cost_l, up_l, down_l, mid_l = [], [], [], [], []
    for owner in range(h.node_count):
        for other in sorted(groups[owner]):
            recs = groups[owner][other]
            if len(recs) == 2 and recs[0][0] == recs[1][0] and recs[0][2] == recs[1][2]:
                recs = [(recs[0][0], None, recs[0][2])]
            for c, is_up, mid in recs:
                other_l.append(other)
                cost_l.append(c)
                up_l.append(is_up is None or is_up)
                down_l.append(is_up is None or not is_up)
                mid_l.append(mid)
        first.append(len(other_l))
    return SearchGraph(h.node_count, list(rank), first, other_l, cost_l, up_l, down_l, mid_l)


def is_acyclic(sg: SearchGraph) -> bool:
    """Every record points from its owner to a strictly higher rank.

    That alone makes increasing rank a topological order.
    """
    rank = sg.rank
    for owner in range(sg.node_count):
        for i in sg.records(owner):
            if rank[sg.other[i]] <= rank[owner]:
                return False
    return True
