"""Preprocessing output: node order plus every edge ever present, and its ACH1 file format."""
from __future__ import annotations

import struct
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import BinaryIO, Sequence

from .contraction import DEFAULT_LIMITS, WitnessLimits, contract_node
from .graph import ContractionGraph, Edge
from .ordering import compute_order, is_permutation

MAGIC = b"ACH1"
VERSION = 1
NO_MIDDLE = 0xFFFFFFFF
REL_TOL = 1e-9

_HEADER = struct.Struct("<4sIQd")
_COUNT = struct.Struct("<Q")
_EDGE = struct.Struct("<IIddI")


class HierarchyFormatError(ValueError):
    pass


class HierarchyCorruptError(ValueError):
    pass


@dataclass(eq=False)
class Hierarchy:
    node_count: int
    rank: list[int]
    edges: list[Edge]
    epsilon: float
    preprocess_seconds: float | None = field(default=None, compare=False)

    @property
    def shortcut_count(self) -> int:
        return sum(1 for e in self.edges if e.middle is not None)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], Edge]:
        return {(e.tail, e.head): e for e in self.edges}

    def __eq__(self, other):
        if not isinstance(other, Hierarchy):
            return NotImplemented
        return (self.node_count == other.node_count and self.epsilon == other.epsilon
                and self.rank == other.rank
                and [e.astuple() for e in self.edges] == [e.astuple() for e in other.edges])


def memory_bound_violations(h: Hierarchy, tol: float = REL_TOL) -> list[Edge]:
    """Edges breaking ``c / (1 + eps) - tol*c <= c_tilde <= c``."""
    factor = 1.0 + h.epsilon
    bad = []
    for e in h.edges:
        if e.c_tilde > e.c + tol * e.c or e.c_tilde < e.c / factor - tol * e.c:
            bad.append(e)
    return bad


def build_hierarchy(g: ContractionGraph, epsilon: float, limits: WitnessLimits = DEFAULT_LIMITS,
                    order: Sequence[int] | None = None) -> Hierarchy:
    """Contract all nodes of a copy of ``g``.

    Without ``order`` the greedy edge-difference heuristic picks the order;
    otherwise ``order`` is a rank array (0 = contracted first) used as given.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    started = time.perf_counter()
    work = g.copy()
    edges: list[Edge] = []

    def contract(u):
        # u's edges are frozen once it leaves the working graph
        edges.extend(work.out_adj[u].values())
        edges.extend(work.in_adj[u].values())
        contract_node(work, u, epsilon, limits)

    if order is None:
        rank = compute_order(work, epsilon, limits, contract=contract)
    else:
        rank = list(order)
        if len(rank) != g.node_count or not is_permutation(rank):
            raise ValueError("order must be a permutation of 0..n-1")
        by_rank = sorted(range(g.node_count), key=rank.__getitem__)
        for u in by_rank:
            contract(u)
    return Hierarchy(g.node_count, rank, edges, float(epsilon),
                     preprocess_seconds=time.perf_counter() - started)


def save_ch(h: Hierarchy, sink: BinaryIO) -> None:
    sink.write(_HEADER.pack(MAGIC, VERSION, h.node_count, h.epsilon))
    sink.write(struct.pack(f"<{h.node_count}I", *h.rank))
    sink.write(_COUNT.pack(len(h.edges)))
    buf = bytearray()
    for e in h.edges:
        mid = NO_MIDDLE if e.middle is None else e.middle
        buf += _EDGE.pack(e.tail, e.head, e.c, e.c_tilde, mid)
    sink.write(bytes(buf))


def _read(source: BinaryIO, size: int, what: str) -> bytes:
    data = source.read(size)
    if len(data) != size:
        raise HierarchyFormatError(f"truncated file while reading {what}")
    return data


def load_ch(source: BinaryIO) -> Hierarchy:
    """Read an ACH1 file, rejecting anything malformed or violating the edge invariants."""
    magic, version, n, epsilon = _HEADER.unpack(_read(source, _HEADER.size, "header"))
    if magic != MAGIC:
        raise HierarchyFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise HierarchyFormatError(f"unsupported version {version}")
    if not epsilon >= 0.0:
        raise HierarchyFormatError(f"invalid epsilon {epsilon}")
    if n >= NO_MIDDLE:
        raise HierarchyFormatError(f"node count {n} too large")
    rank = list(struct.unpack(f"<{n}I", _read(source, 4 * n, "rank array")))
    if not is_permutation(rank):
        raise HierarchyFormatError("rank array is not a permutation")
    (m,) = _COUNT.unpack(_read(source, _COUNT.size, "edge count"))
    raw = _read(source, m * _EDGE.size, "edge records")
    if source.read(1):
        raise HierarchyFormatError("trailing bytes after edge records")

    edges = []
    seen = set()
    for i, (tail, head, c, c_tilde, mid) in enumerate(_EDGE.iter_unpack(raw)):
        if tail >= n or head >= n or tail == head:
            raise HierarchyFormatError(f"edge {i}: bad endpoints {tail}->{head}")
        if (tail, head) in seen:
            raise HierarchyFormatError(f"edge {i}: duplicate pair {tail}->{head}")
        seen.add((tail, head))
        if not 0.0 <= c < float("inf"):
            raise HierarchyFormatError(f"edge {i}: invalid weight {c}")
        if mid != NO_MIDDLE and (mid >= n or mid in (tail, head)):
            raise HierarchyFormatError(f"edge {i}: bad middle node {mid}")
        edges.append(Edge(tail, head, c, c_tilde, None if mid == NO_MIDDLE else mid))
    h = Hierarchy(n, rank, edges, epsilon)
    bad = memory_bound_violations(h)
    if bad:
        raise HierarchyFormatError(f"{len(bad)} edges violate the witness-memory bound, e.g. {bad[0]}")
    return h


def unpack_path(h: Hierarchy, packed: Sequence) -> list[int]:
    """Expand shortcuts recursively into a node sequence of the original graph.

    ``packed`` holds chained edges in original direction; anything with
    ``tail``/``head`` attributes works, the stored hierarchy edge is looked up.
    """
    if not packed:
        return []
    index = h.edge_index
    nodes = [packed[0].tail]
    for item in packed:
        if item.tail != nodes[-1]:
            raise ValueError(f"packed path does not chain at {item.tail}")
        stack = [(item.tail, item.head)]
        while stack:
            a, b = stack.pop()
            e = index.get((a, b))
            if e is None:
                raise HierarchyCorruptError(f"edge {a}->{b} missing from hierarchy")
            if e.middle is None:
                nodes.append(b)
            else:
                stack.append((e.middle, b))
                stack.append((a, e.middle))
    return nodes
