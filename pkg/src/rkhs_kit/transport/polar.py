"""Discrete polar factorization potential."""

import numpy as np

from .._validation import check_points
from ..exceptions import ValidationError
from ..operators.differential import PINV_RTOL, helmholtz_hodge


def polar_potential(kernel, X, Y_sigma, epsilon=0.0, rtol=PINV_RTOL):
    """Potential h at X with kernel gradient closest to the matched points.

    ``h = Laplace^+ (div Y_sigma)``, which is the least-squares solution of
    ``grad_k h = Y_sigma``. When ``Y_sigma`` comes from an assignment with
    squared Euclidean cost, ``grad_k h`` approximates the monotone
    transport map.

    Parameters
    ----------
    kernel : Kernel or None
        Differentiable kernel.
    X : array-like of shape (N, D)
    Y_sigma : array-like of shape (N, D)
        Targets already reordered by the assignment.

    Returns
    -------
    h : ndarray of shape (N,)
    """
    X = check_points(X)
    Ys = np.asarray(Y_sigma, dtype=float)
    if Ys.ndim == 1:
        Ys = Ys[:, None]
    if Ys.shape != X.shape:
        raise ValidationError(f"Y_sigma must have shape {X.shape}, got {Ys.shape}")
    return helmholtz_hodge(kernel, X, Ys, epsilon=epsilon, rtol=rtol)[0]
