"""Weighted small-step walks in the quarter plane.

Exact enumeration and the functional equation, the kernel curve and its
branch points, the group of the walk and its orbit-sum, elliptic periods
and uniformization, series guessing, and the resulting classification.
"""

__version__ = "0.1.0"

from .classify import Budget, Classification, classify, crossvalidate, scan_unweighted
from .errors import QuadwalkError
from .group import group_of, orbit_sum
from .kernel import branch_points, build_kernel, classify_curve, discriminants
from .model import WalkModel, from_weights, load_model, named_model, unweighted
from .series import check_functional_equation, enumerate_walks, specialize

__all__ = [
    "Budget", "Classification", "QuadwalkError", "WalkModel", "branch_points", "build_kernel",
    "check_functional_equation", "classify", "classify_curve", "crossvalidate", "discriminants",
    "enumerate_walks", "from_weights", "group_of", "load_model", "named_model", "orbit_sum",
    "scan_unweighted", "specialize", "unweighted",
]
