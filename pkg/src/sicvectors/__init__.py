"""Single Input Change test-vector generation for sequential cells."""

__version__ = "0.1.0"

from .state_table import StateTable, StateTableError, expand, parse, serialize, validate_complete
from .sicstg import Configuration, SicGraph, build_edges, build_graph, build_vertices, prune_and_check, scc
from .dcpw import PostmanWalk, dcpw
from .vectors import replay, walk_to_vectors
from .pipeline import generate

__all__ = [
    "Configuration", "PostmanWalk", "SicGraph", "StateTable", "StateTableError",
    "build_edges", "build_graph", "build_vertices", "dcpw", "expand", "generate",
    "parse", "prune_and_check", "replay", "scc", "serialize", "validate_complete",
    "walk_to_vectors",
]
