"""Exact checks of splice-quotient topology for z^n = f(x,y), f an irreducible plane curve germ."""
from .builder import CoverGraphBundle, build_cover_graph, build_pathological, build_plane_graph
from .closedform import main_theorem_classify, weights_closed_form
from .curve import PairSystem, classify_link, cover_invariants, parse_pairs
from .graph import ResolutionGraph, Vertex, determinant, splice_extract
from .nw import check_all, emit_splice_equations

__version__ = "0.1.0"

__all__ = [
    "CoverGraphBundle",
    "PairSystem",
    "ResolutionGraph",
    "Vertex",
    "build_cover_graph",
    "build_pathological",
    "build_plane_graph",
    "check_all",
    "classify_link",
    "cover_invariants",
    "determinant",
    "emit_splice_equations",
    "main_theorem_classify",
    "parse_pairs",
    "splice_extract",
    "weights_closed_form",
]
