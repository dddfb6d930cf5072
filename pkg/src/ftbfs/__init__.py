"""Fault-tolerant BFS structures: construction, analysis and verification."""

from .graph import (
    UNREACHABLE,
    Graph,
    GraphError,
    GraphView,
    ParseError,
    Path,
    PathKey,
    bfs_distance,
    bfs_distances,
    format_edge_list,
    parse_edge_list,
    read_edge_list,
    restricted_graph,
    unique_sssp,
    write_edge_list,
)
from .replacement import (
    Detour,
    FaultSet,
    InvariantError,
    ReplacementPath,
    SourceTree,
    order_fault_pairs,
    pid_rp,
    pipi_rp,
    single_fault_rp,
)
from .builder import FtStructure, build_f_pi_only, build_ftbfs, build_h_of_v
from .verify import (
    VerifyReport,
    edge_necessity,
    ft_diameter,
    oracle_distance,
    verify_ft,
    witness_is_valid,
)

__all__ = [
    "UNREACHABLE",
    "Graph",
    "GraphError",
    "GraphView",
    "ParseError",
    "Path",
    "PathKey",
    "bfs_distance",
    "bfs_distances",
    "format_edge_list",
    "parse_edge_list",
    "read_edge_list",
    "restricted_graph",
    "unique_sssp",
    "write_edge_list",
    "Detour",
    "FaultSet",
    "InvariantError",
    "ReplacementPath",
    "SourceTree",
    "order_fault_pairs",
    "pid_rp",
    "pipi_rp",
    "single_fault_rp",
    "FtStructure",
    "build_f_pi_only",
    "build_ftbfs",
    "build_h_of_v",
    "VerifyReport",
    "edge_necessity",
    "ft_diameter",
    "oracle_distance",
    "verify_ft",
    "witness_is_valid",
]

__version__ = "0.1.0"
