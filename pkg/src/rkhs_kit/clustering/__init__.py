"""Discrepancy-based clustering and permutation descent."""

from .assignment import assign, balanced_assign, inertia, semisup_predict
from .estimator import DiscrepancyClustering
from .model import ClusterModel
from .selection import (
                        discrepancy,
                        discrepancy_gradient,
                        greedy_select,
                        sharpen_descent,
                        subset_refine,
)
from .swap import FunctionGain, LinearAssignmentGain, SwapGain, swap_descent

__all__ = [
    "ClusterModel", "DiscrepancyClustering", "FunctionGain", "LinearAssignmentGain",
    "SwapGain", "assign", "balanced_assign", "discrepancy", "discrepancy_gradient",
    "greedy_select", "inertia", "semisup_predict", "sharpen_descent", "subset_refine",
    "swap_descent",
]
