"""Kernel-induced distances and the maximum mean discrepancy."""

import numpy as np

from .._validation import check_points, check_same_dim
from .kernel import fitted


def gram(kernel, X, Y=None):
    """Gram matrix K(X, Y); an unfitted kernel is fitted on the stacked sets."""
    X = check_points(X, "X")
    if Y is None:
        return fitted(kernel, X).gram(X)
    Y = check_points(Y, "Y")
    check_same_dim(X, Y)
    return fitted(kernel, X, Y).gram(X, Y)


def distance_matrix(kernel, X, Y=None):
    """Matrix of d_k(x^i, y^j) = k(x^i, x^i) + k(y^j, y^j) - 2 k(x^i, y^j).

    Examples
    --------
    >>> import numpy as np
    >>> from rkhs_kit.kernels import Kernel
    >>> D = distance_matrix(Kernel("matern", maps=()), np.array([[0.0]]), np.array([[1.0]]))
    >>> round(float(D[0, 0]), 7)
    1.2642411
    """
    X = check_points(X, "X")
    Y = X if Y is None else check_points(Y, "Y")
    check_same_dim(X, Y)
    k = fitted(kernel, X) if Y is X else fitted(kernel, X, Y)
    dx = k.diag(X)
    dy = dx if Y is X else k.diag(Y)
    return dx[:, None] + dy[None, :] - 2.0 * k.gram(X, Y)


def mmd(kernel, X, Y):
    """Squared kernel discrepancy between two point sets.

    Returns ``mean K(X, X) + mean K(Y, Y) - 2 mean K(X, Y)``, the squared
    maximum mean discrepancy between the empirical measures of ``X`` and
    ``Y``. Use :func:`mmd_distance` for the square root.

    Parameters
    ----------
    kernel : Kernel or None
        Kernel specification. ``None`` selects the default kernel. An
        unfitted kernel is fitted on the stacked sets.
    X, Y : array-like of shape (N_x, D) and (N_y, D)

    Returns
    -------
    float
    """
    X = check_points(X, "X")
    Y = check_points(Y, "Y")
    check_same_dim(X, Y)
    k = fitted(kernel, X, Y)
    return _mmd_fitted(k, X, Y)


def _mmd_fitted(k, X, Y):
    return float(np.mean(k.gram(X, X)) + np.mean(k.gram(Y, Y)) - 2.0 * np.mean(k.gram(X, Y)))


def mmd_distance(kernel, X, Y):
    """Square root of :func:`mmd`, clamped at zero."""
    return float(np.sqrt(max(mmd(kernel, X, Y), 0.0)))
