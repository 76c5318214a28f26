"""Approximate contraction hierarchies with a (1+eps) distance guarantee."""
from .contraction import WitnessLimits, WitnessPath, apply_witness_memory, contract_node, witness_search
from .graph import INF, ContractionGraph, Edge, emit_dimacs, generate_random_graph, load_dimacs
from .hierarchy import Hierarchy, build_hierarchy, memory_bound_violations, load_ch, save_ch, unpack_path
from .ordering import compute_order, simulate_contraction
from .query import QueryContext, QueryResult, query_basic, query_stalling, retrieve_path, stall_test
from .search_graph import SearchGraph, build_search_graph
from .verify import ErrorStats, build_stall_example, dijkstra_oracle, verify_pairs

__all__ = [
    "INF", "ContractionGraph", "Edge", "ErrorStats", "Hierarchy", "QueryContext", "QueryResult",
    "SearchGraph", "WitnessLimits", "WitnessPath", "apply_witness_memory", "build_stall_example",
    "build_hierarchy", "build_search_graph", "compute_order", "contract_node", "dijkstra_oracle",
    "emit_dimacs", "generate_random_graph", "memory_bound_violations", "load_ch", "load_dimacs",
    "query_basic", "query_stalling", "retrieve_path", "save_ch", "simulate_contraction",
    "stall_test", "unpack_path", "verify_pairs", "witness_search",
]
