"""Exact combinatorics of Retakh-restricted Dyck paths."""
from .series import BivarSeries, Series, solve_fixed_point
from .paths import DyckPath, PlaneTree, enumerate_restricted, is_retakh, path_to_tree, tree_to_path
from . import asymptotics, gf

__all__ = [
    "Series",
    "BivarSeries",
    "solve_fixed_point",
    "DyckPath",
    "PlaneTree",
    "enumerate_restricted",
    "is_retakh",
    "path_to_tree",
    "tree_to_path",
    "gf",
    "asymptotics",
]
