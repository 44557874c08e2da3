"""Finite combinatorics of the tree category Omega and dendroidal sets."""
from .trees import Tree, Vertex, TreeError, NotClosed, eta, corolla, linear_tree, enumerate_trees, canonical_code
from .serialize import parse_term, to_term
from .omega import TreeMorphism, hom, compose, factorize, elementary_faces, elementary_degeneracies

__all__ = [
    "Tree",
    "Vertex",
    "TreeError",
    "NotClosed",
    "eta",
    "corolla",
    "linear_tree",
    "enumerate_trees",
    "canonical_code",
    "parse_term",
    "to_term",
    "TreeMorphism",
    "hom",
    "compose",
    "factorize",
    "elementary_faces",
    "elementary_degeneracies",
]
