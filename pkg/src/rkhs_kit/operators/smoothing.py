"""Nadaraya-Watson averaging and Laplacian denoising."""

import numpy as np

from .._validation import check_points, check_same_dim, check_values
from ..exceptions import IsolatedQueryError, ValidationError
from ..kernels.kernel import fitted
from .regressor import KernelRegressor


def nadaraya_watson_weights(kernel, X, Z):
    """Row-normalized weights k(z, x^n) / sum_m k(z, x^m), shape (N_z, N_x)."""
    X = check_points(X)
    Z = check_points(Z, "Z")
    check_same_dim(X, Z, ("X", "Z"))
    K = fitted(kernel, X).gram(Z, X)
    if np.any(K < 0.0):
        raise ValidationError("Nadaraya-Watson needs a nonnegative kernel")
    s = K.sum(axis=1)
    bad = ~(s > 0.0)
    if np.any(bad):
        raise IsolatedQueryError("vanishing kernel mass at some queries",
                                 isolated_queries=np.flatnonzero(bad).tolist())
    return K / s[:, None]


def nadaraya_watson(kernel, X, yX, Z):
    """Kernel-weighted average of the labels at each query point."""
    X = check_points(X)
    F, was_1d = check_values(yX, X.shape[0], "yX")
    out = nadaraya_watson_weights(kernel, X, Z) @ F
    return out[:, 0] if was_1d else out


def denoise(kernel, X, fX_noisy, epsilon):
    """Values at X of the fit regularized by the Laplace-Beltrami matrix.

    Solves (K(X, X) + epsilon Laplace) theta = f; ``epsilon = 0`` returns the
    interpolant, larger values flatten the kernel gradient.
    """
    reg = KernelRegressor(kernel=kernel, epsilon=epsilon, regularizer="laplacian")
    return reg.fit(X, fX_noisy).predict(X)
