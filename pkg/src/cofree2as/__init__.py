"""Exact computations in the free 2-associative bialgebra on planar rooted trees."""

from .errors import ConsistencyError
from .linalg import BACKEND
from .trees import LEAF, PlanarTree, corolla, enumerate_trees, gamma, graft, mirror, parse_tree, schroeder, ungraft

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConsistencyError",
    "LEAF",
    "PlanarTree",
    "corolla",
    "enumerate_trees",
    "gamma",
    "graft",
    "mirror",
    "parse_tree",
    "schroeder",
    "ungraft",
]
