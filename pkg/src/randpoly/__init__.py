"""Random 0/1 polytopes: sampling, exact 1-skeletons and threshold experiments."""

from .adjacency import (AUTO, LP, METHODS, ORACLE_FULL, ORACLE_HYPERPLANE, EdgeStatus,
                        PolytopeGraph, build_graph, edge_status, find_non_edge, replay)
from .hypercube import Point
from .sampling import RateSpec, VertexSet, sample_rate, sample_vertex_set

__version__ = "0.1.0"

__all__ = [
    "AUTO", "LP", "METHODS", "ORACLE_FULL", "ORACLE_HYPERPLANE", "EdgeStatus", "PolytopeGraph",
    "Point", "RateSpec", "VertexSet", "build_graph", "edge_status", "find_non_edge", "replay",
    "sample_rate", "sample_vertex_set",
]
