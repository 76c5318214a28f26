"""Mutable directed graph used during preprocessing, plus DIMACS I/O and random instances."""
from __future__ import annotations

import math
import random
from typing import IO, Iterable, Iterator

INF = math.inf

INSERTED = "inserted"
REPLACED = "replaced"
KEPT_EXISTING = "kept-existing"


class GraphError(ValueError):
    """Invalid use of a graph (dead or out-of-range node, self-loop)."""


class DimacsError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class DimacsRangeError(DimacsError):
    pass


class DimacsWeightError(DimacsError):
    pass


class Edge:
    """Directed edge with primary weight ``c`` and witness-memory weight ``c_tilde``.

    ``middle`` is the contracted node a shortcut bypasses; ``None`` for original edges.
    """

    __slots__ = ("tail", "head", "c", "c_tilde", "middle")

    def __init__(self, tail: int, head: int, c: float, c_tilde: float | None = None,
                 middle: int | None = None):
        if tail == head:
            raise GraphError(f"self-loop at node {tail}")
        self.tail = tail
        self.head = head
        self.c = float(c)
        self.c_tilde = self.c if c_tilde is None else float(c_tilde)
        self.middle = middle

    @property
    def is_shortcut(self) -> bool:
        return self.middle is not None

    def astuple(self) -> tuple:
        return (self.tail, self.head, self.c, self.c_tilde, self.middle)

    def __eq__(self, other):
        if not isinstance(other, Edge):
            return NotImplemented
        return self.astuple() == other.astuple()

    __hash__ = None

    def __repr__(self):
        mid = "" if self.middle is None else f", middle={self.middle}"
        return f"Edge({self.tail}->{self.head}, c={self.c:g}, c_tilde={self.c_tilde:g}{mid})"


class ContractionGraph:
    """Adjacency structure supporting node removal and shortcut insertion.

    Each node keeps two dicts keyed by the neighbor id, one for outgoing and one
    for incoming edges; the same ``Edge`` object sits in both, so weight updates
    are visible from either side. At most one edge exists per ordered pair.
    """

    def __init__(self, node_count: int):
        if node_count < 0:
            raise GraphError("node_count must be nonnegative")
        self.node_count = node_count
        self.out_adj: list[dict[int, Edge]] = [{} for _ in range(node_count)]
        self.in_adj: list[dict[int, Edge]] = [{} for _ in range(node_count)]
        self.alive = [True] * node_count

    def _check_alive(self, u: int) -> None:
        if not 0 <= u < self.node_count:
            raise GraphError(f"node {u} out of range [0, {self.node_count})")
        if not self.alive[u]:
            raise GraphError(f"node {u} has been contracted")

    def add_or_merge_edge(self, e: Edge) -> str:
        """Insert ``e`` or merge it into the existing edge for the same pair.

        Merging keeps the pair-wise minima of ``c`` and ``c_tilde``; ``middle``
        follows whichever edge supplied the smaller ``c``.
        """
        self._check_alive(e.tail)
        self._check_alive(e.head)
        if e.tail == e.head:
            raise GraphError(f"self-loop at node {e.tail}")
        old = self.out_adj[e.tail].get(e.head)
        if old is None:
            self.out_adj[e.tail][e.head] = e
            self.in_adj[e.head][e.tail] = e
            return INSERTED
        old.c_tilde = min(old.c_tilde, e.c_tilde)
        if e.c < old.c:
            old.c = e.c
            old.middle = e.middle
            return REPLACED
        return KEPT_EXISTING

    def add_edge(self, tail: int, head: int, c: float) -> str:
        return self.add_or_merge_edge(Edge(tail, head, c))

    def remove_node(self, u: int) -> None:
        self._check_alive(u)
        for w in self.out_adj[u]:
            del self.in_adj[w][u]
        for v in self.in_adj[u]:
            del self.out_adj[v][u]
        self.out_adj[u] = {}
        self.in_adj[u] = {}
        self.alive[u] = False

    def edge(self, tail: int, head: int) -> Edge | None:
        return self.out_adj[tail].get(head)

    def edges(self) -> Iterator[Edge]:
        for adj in self.out_adj:
            yield from adj.values()

    @property
    def edge_count(self) -> int:
        return sum(len(adj) for adj in self.out_adj)

    def degree(self, u: int) -> int:
        return len(self.out_adj[u]) + len(self.in_adj[u])

    def copy(self) -> ContractionGraph:
        g = ContractionGraph(self.node_count)
        g.alive = list(self.alive)
        for e in self.edges():
            dup = Edge(e.tail, e.head, e.c, e.c_tilde, e.middle)
            g.out_adj[e.tail][e.head] = dup
            g.in_adj[e.head][e.tail] = dup
        return g

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int, float]]) -> ContractionGraph:
        """Build a graph from ``(tail, head, weight)`` triples, dropping self-loops."""
        g = cls(node_count)
        for tail, head, w in edges:
            if tail != head:
                g.add_edge(tail, head, w)
        return g


def load_dimacs(stream: IO[str]) -> ContractionGraph:
    """Parse a 9th DIMACS challenge ``.gr`` file (1-based ids) into a graph."""
    g = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if g is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "sp":
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            try:
                n, _m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed problem line {line!r}", lineno) from None
            if n < 0:
                raise DimacsError("negative node count", lineno)
            g = ContractionGraph(n)
        elif parts[0] == "a":
            if g is None:
                raise DimacsError("arc line before problem line", lineno)
            if len(parts) != 4:
                raise DimacsError(f"malformed arc line {line!r}", lineno)
            try:
                tail, head, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed arc line {line!r}", lineno) from None
            for node in (tail, head):
                if not 1 <= node <= g.node_count:
                    raise DimacsRangeError(f"node id {node} out of range 1..{g.node_count}", lineno)
            if w < 0:
                raise DimacsWeightError(f"negative weight {w}", lineno)
            if tail != head:
                g.add_edge(tail - 1, head - 1, float(w))
        else:
            raise DimacsError(f"unknown line type {parts[0]!r}", lineno)
    if g is None:
        raise DimacsError("missing problem line")
    return g


def emit_dimacs(g: ContractionGraph, stream: IO[str], comment: str | None = None) -> None:
    """Write the alive edges of ``g`` in DIMACS format; weights are written as integers."""
    if comment:
        for line in comment.splitlines():
            stream.write(f"c {line}\n")
    edges = sorted(g.edges(), key=lambda e: (e.tail, e.head))
    stream.write(f"p sp {g.node_count} {len(edges)}\n")
    for e in edges:
        w = round(e.c)
        if w != e.c:
            raise ValueError(f"weight {e.c} of edge {e.tail}->{e.head} is not integral")
        stream.write(f"a {e.tail + 1} {e.head + 1} {w}\n")


def generate_random_graph(n: int, m: int, weight_range: tuple[float, float] = (1, 1000),
                          seed: int = 0, integral: bool = True) -> ContractionGraph:
    """Random directed graph with ``m`` sampled arcs (duplicates merged by minimum weight).

    With ``integral`` the weights are uniform integers in the closed range, which
    keeps the result writable as DIMACS.
    """
    lo, hi = weight_range
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if not 0 < lo <= hi:
        raise ValueError("need 0 < min weight <= max weight")
    if n == 1 and m > 0:
        raise ValueError("a single node admits no non-loop edges")
    if integral:
        lo, hi = math.ceil(lo), math.floor(hi)
        if lo > hi:
            raise ValueError("weight range contains no integer")
    rng = random.Random(seed)
    g = ContractionGraph(n)
    for _ in range(m):
        tail = rng.randrange(n)
        head = rng.randrange(n - 1)
        if head >= tail:
            head += 1
        w = rng.randint(lo, hi) if integral else rng.uniform(lo, hi)
        g.add_edge(tail, head, w)
    return g
