"""Reproducing-kernel toolkit: regression, operators, clustering, transport, sampling."""

from .kernels import Kernel, distance_matrix, gram, mmd, mmd_distance
from .operators import KernelRegressor

__version__ = "0.1.0"

__all__ = ["Kernel", "KernelRegressor", "distance_matrix", "gram", "mmd", "mmd_distance"]
