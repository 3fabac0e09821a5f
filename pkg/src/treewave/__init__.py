"""Boundary inverse data and leaf peeling on metric trees."""

__version__ = "0.1.0"

from .potential import PotentialProfile
from .tree import (Edge, MetricTree, Sheaf, enumerate_sheaves, interval,
                   path_distance, peel, star, two_level_tree, validate)

__all__ = ["PotentialProfile", "Edge", "MetricTree", "Sheaf", "enumerate_sheaves",
           "interval", "path_distance", "peel", "star", "two_level_tree",
           "validate", "__version__"]
