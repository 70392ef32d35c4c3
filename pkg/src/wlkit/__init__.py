"""wlkit: Weisfeiler-Leman refinement, separators, coherent configurations,
CFI constructions and brute-force oracles for checking them."""

from .errors import (GraphFormatError, InvalidGraphError, PreconditionError, ResourceGuardError,
                     TheoremViolation, WLKitError)
from .graph import Graph, parse_edge_list, parse_graph6, emit_graph6
from .wl import SharedColorTable, TupleColoring, equivalent_k, joint_stable_coloring, stable_coloring

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphFormatError", "InvalidGraphError", "PreconditionError", "ResourceGuardError",
    "SharedColorTable", "TheoremViolation", "TupleColoring", "WLKitError", "emit_graph6", "equivalent_k",
    "joint_stable_coloring", "parse_edge_list", "parse_graph6", "stable_coloring",
]
