"""Exact computations in hairy graph complexes."""

from .formal import FormalSum
from .graphcore import (
    EPSILON,
    ONE,
    OMEGA,
    Flavor,
    GraphError,
    HairyGraph,
    Parameters,
    SignedCanonicalGraph,
    canonicalize,
    canonicalize_brute_force,
    degree,
    kernel_name,
    named_graph,
    orientation_sign,
    raw_named_graph,
)

__version__ = "0.1.0"

__all__ = [
    "EPSILON", "ONE", "OMEGA", "Flavor", "FormalSum", "GraphError", "HairyGraph", "Parameters",
    "SignedCanonicalGraph", "canonicalize", "canonicalize_brute_force", "degree", "kernel_name",
    "named_graph", "orientation_sign", "raw_named_graph",
]
