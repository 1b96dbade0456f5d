"""Closed {p,3} cell complexes: construction, coloring, validation and drawing."""

from .coloring import three_color
from .complex import (
    COLORS,
    CellComplex,
    Coloring,
    ShrunkLattice,
    ValidationReport,
    adjacency_isomorphic,
    coloring_problems,
    make_complex,
    shrunk_lattice,
    validate_complex,
)
from .geometric import build_geometric, build_universal_patch, quotient_by_pairings

__all__ = [
    "COLORS",
    "CellComplex",
    "Coloring",
    "ShrunkLattice",
    "ValidationReport",
    "adjacency_isomorphic",
    "build_geometric",
    "build_universal_patch",
    "coloring_problems",
    "make_complex",
    "quotient_by_pairings",
    "shrunk_lattice",
    "three_color",
    "validate_complex",
]
