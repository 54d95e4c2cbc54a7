"""Clique graphs, clique complexes and homotopy-preserving reductions of small graphs."""

from .cliques import clique_graph, classify_k2_vertices, is_helly, iterate_clique_graph, maximal_cliques
from .graph import Graph, from_graph6, is_isomorphic, is_low_degree, to_graph6
from .homology import HomotopySignature, homotopy_signature
from .reduce import build_h_clique_level, build_h_invariance, dismantle, low_degree_reduce, replay

__all__ = [
    "Graph",
    "HomotopySignature",
    "build_h_clique_level",
    "build_h_invariance",
    "classify_k2_vertices",
    "clique_graph",
    "dismantle",
    "from_graph6",
    "homotopy_signature",
    "is_helly",
    "is_isomorphic",
    "is_low_degree",
    "iterate_clique_graph",
    "low_degree_reduce",
    "maximal_cliques",
    "replay",
    "to_graph6",
]
