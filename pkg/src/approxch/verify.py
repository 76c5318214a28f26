"""Ground-truth oracle, statistical verification of the approximation bound, stall counterexample."""
from __future__ import annotations

import heapq
import json
import random
from dataclasses import asdict, dataclass

from .graph import INF, ContractionGraph
from .hierarchy import Hierarchy
from .query import QueryContext
from .search_graph import SearchGraph, build_search_graph

REL_TOL = 1e-9


class ReachabilityMismatch(AssertionError):
    pass


def dijkstra_oracle(g: ContractionGraph, s: int, t: int) -> float:
    """Plain unidirectional Dijkstra on the original graph."""
    dist = {s: 0.0}
    done = set()
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if u == t:
            return d
        done.add(u)
        for v, e in g.out_adj[u].items():
            nd = d + e.c
            if nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return INF


@dataclass
class ErrorStats:
    pairs: int = 0
    reachable: int = 0
    max_ratio: float = 1.0
    mean_ratio: float = 1.0
    violations: int = 0
    epsilon: float = 0.0
    stalling: bool = True
    settled: int = 0
    relaxed: int = 0

    def as_text(self) -> str:
        return (f"pairs={self.pairs} reachable={self.reachable} epsilon={self.epsilon:g} "
                f"stalling={'on' if self.stalling else 'off'} max_ratio={self.max_ratio:.12f} "
                f"mean_ratio={self.mean_ratio:.12f} violations={self.violations} "
                f"settled={self.settled} relaxed={self.relaxed}")

    def as_json(self) -> str:
        return json.dumps({"record": "verify", **asdict(self)}, sort_keys=True)


def within_bound(result: float, exact: float, epsilon: float, tol: float = REL_TOL) -> bool:
    return exact * (1.0 - tol) <= result <= (1.0 + epsilon) * exact * (1.0 + tol)


def verify_pairs(g: ContractionGraph, h: Hierarchy, n_pairs: int, seed: int,
                 use_stalling: bool = True, sg: SearchGraph | None = None,
                 tol: float = REL_TOL) -> ErrorStats:
    """Compare hierarchy queries against the oracle on ``n_pairs`` random pairs.

    Raises ``ReachabilityMismatch`` when the two disagree on whether a
    target can be reached at all.
    """
    if g.node_count != h.node_count:
        raise ValueError("graph and hierarchy differ in node count")
    sg = sg or build_search_graph(h)
    ctx = QueryContext(sg)
    rng = random.Random(seed)
    n = g.node_count
    stats = ErrorStats(epsilon=h.epsilon, stalling=use_stalling)
    ratio_sum = 0.0
    for _ in range(n_pairs):
        s, t = rng.randrange(n), rng.randrange(n)
        exact = dijkstra_oracle(g, s, t)
        res = ctx.run(s, t, stalling=use_stalling, epsilon=h.epsilon)
        stats.pairs += 1
        stats.settled += res.settled
        stats.relaxed += res.relaxed
        if (exact == INF) != (res.distance == INF):
            raise ReachabilityMismatch(
                f"pair ({s}, {t}): oracle {exact}, hierarchy {res.distance}")
        if exact == INF:
            continue
        stats.reachable += 1
        if exact > 0:
            ratio = res.distance / exact
        else:
            ratio = 1.0 if res.distance == 0 else INF
        ratio_sum += ratio
        stats.max_ratio = max(stats.max_ratio, ratio)
        if not within_bound(res.distance, exact, h.epsilon, tol):
            stats.violations += 1
    if stats.reachable:
        stats.mean_ratio = ratio_sum / stats.reachable
    return stats


@dataclass(frozen=True)
class StallExample:
    graph: ContractionGraph
    rank: list[int]
    nodes: dict[str, int]
    weights: dict[str, float]


STALL_EXAMPLE_NAMES = ("s", "u", "x", "y", "v", "z")


def stall_example_conditions(w: dict[str, float], epsilon: float) -> dict[str, bool]:
    """The three inequalities the stall counterexample must satisfy."""
    f = 1.0 + epsilon
    via_u = w["xu"] + w["uv"]
    via_y = w["xy"] + w["yv"]
    d_x, d_y, d_u = w["sx"], w["sx"] + w["xy"], w["su"]
    d_v = min(d_y + w["yv"], d_u + w["uv"])
    return {
        # witness <x,y,v> avoids the shortcut, but only thanks to the slack
        "a": via_u < via_y <= f * via_u,
        # exact stalling fires at u, the relaxed test does not
        "b": w["sx"] + w["xu"] < w["su"] <= w["sx"] + f * w["xu"],
        # forward settle order s, x, y, u, v, z
        "c": 0.0 < d_x < d_y < d_u < d_v < d_v + w["vz"],
    }


def build_stall_example(epsilon: float = 0.1) -> StallExample:
    """Concrete instance where exact stall-on-demand is unsound on a heuristic hierarchy.

    Rank order is s < u < x < y < v < z: u is the first node contracted
    with neighbors, and s sits below it so the forward search can reach u.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    c_xu, c_uv = 0.95, 1.0
    slack = min(epsilon, 0.1)
    w = {
        "sx": 1.0,
        "xu": c_xu,
        "su": 1.0 + c_xu * (1.0 + slack / 2),
        "uv": c_uv,
        "xy": 0.9,
        "vz": 1.0,
    }
    # witness sits halfway between exact and (1+eps) times the path through u
    w["yv"] = (c_xu + c_uv) * (1.0 + slack * 0.77) - w["xy"]
    idx = {name: i for i, name in enumerate(STALL_EXAMPLE_NAMES)}
    edges = [("s", "x", "sx"), ("x", "u", "xu"), ("s", "u", "su"), ("u", "v", "uv"),
             ("x", "y", "xy"), ("y", "v", "yv"), ("v", "z", "vz")]
    g = ContractionGraph(len(STALL_EXAMPLE_NAMES))
    for a, b, key in edges:
        g.add_edge(idx[a], idx[b], w[key])
    rank = list(range(len(STALL_EXAMPLE_NAMES)))
    checks = stall_example_conditions(w, epsilon)
    if not all(checks.values()):
        raise AssertionError(f"stall counterexample weights violate {checks}")
    return StallExample(g, rank, idx, w)
