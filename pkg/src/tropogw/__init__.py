"""Relative invariants of h-transverse toric surfaces via floor diagrams.

Exact counts from marked and thickened floor diagrams, chamber-wise
polynomial fitting, flow polytopes, and a bosonic Fock space check.
"""
from .errors import ValidationError
from .invariants import (InvariantQuery, connected_invariant, disconnected_invariant,
                         function_F)
from .polygon import build_polygon
from .tangency import MultiplicityVector, make_divergence

__all__ = ["InvariantQuery", "MultiplicityVector", "ValidationError", "build_polygon",
           "connected_invariant", "disconnected_invariant", "function_F", "make_divergence"]
__version__ = "0.1.0"
