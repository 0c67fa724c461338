"""Kernels, rescaling maps, Gram and distance matrices, discrepancy."""

from ._bases import BASES
from .algebra import combine_kernels, pipe_projection
from .discrepancy import distance_matrix, gram, mmd, mmd_distance
from .kernel import Kernel, default_kernel, fitted
from .maps import DEFAULT_CHAIN, MAPS, MapChain, make_map


def eval_kernel(kernel, x, y):
    """k(S(x), S(y)) for a fitted kernel."""
    return kernel(x, y)


def fit_map(chain, X):
    """Fit a map chain (names, dicts or map objects) on X."""
    return MapChain(list(chain)).fit(X)


__all__ = [
    "BASES", "DEFAULT_CHAIN", "MAPS", "Kernel", "MapChain", "combine_kernels",
    "default_kernel", "distance_matrix", "eval_kernel", "fit_map", "fitted", "gram",
    "make_map", "mmd", "mmd_distance", "pipe_projection",
]
