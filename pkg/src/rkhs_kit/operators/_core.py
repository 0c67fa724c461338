"""Fit equations shared by regressors and operator matrices."""

import numpy as np

from .._validation import check_points, check_same_dim
from ..exceptions import ValidationError
from .linalg import sym_solve

DEFAULT_EPSILON = 1e-8


def resolve_basis(X, Y):
    """Return ``(Y, same)`` where ``same`` tells whether the basis is X itself."""
    if Y is None:
        return X, True
    Y = check_points(Y, "Y")
    check_same_dim(X, Y, ("X", "Y"))
    return Y, bool(Y.shape == X.shape and np.array_equal(Y, X))


def regularizer_matrix(regularizer, kernel, Y, n):
    if regularizer is None or (isinstance(regularizer, str) and regularizer == "identity"):
        return np.eye(n)
    if isinstance(regularizer, str) and regularizer == "laplacian":
        from .differential import laplace_beltrami
        return laplace_beltrami(kernel, Y)
    if isinstance(regularizer, str):
        raise ValidationError(f"unknown regularizer '{regularizer}'")
    R = np.asarray(regularizer, dtype=float)
    if R.shape != (n, n):
        raise ValidationError(f"regularizer must be {n}x{n}, got {R.shape}")
    return R


def solve_coefficients(kernel, X, Y, same, F, epsilon, regularizer="identity"):
    """theta for K(., Y) theta fitted to values ``F`` at ``X``.

    Y = X: theta = (K(X, X) + eps R)^{-1} F.
    Otherwise the least-squares form theta = (K(Y, X) K(X, Y) + eps R)^{-1} K(Y, X) F.
    """
    if epsilon < 0:
        raise ValidationError("epsilon must be >= 0")
    n_y = Y.shape[0]
    needs_R = epsilon > 0
    if same:
        M = kernel.gram(X)
        rhs = F
    else:
        Kyx = kernel.gram(Y, X)
        M = Kyx @ Kyx.T
        rhs = Kyx @ F
    if needs_R:
        M = M + epsilon * regularizer_matrix(regularizer, kernel, Y, n_y)
    return sym_solve(M, rhs)


def fit_matrix(kernel, X, Y, same, epsilon, regularizer="identity"):
    """Matrix A with theta = A f(X), shape (N_y, N_x)."""
    return solve_coefficients(kernel, X, Y, same, np.eye(X.shape[0]), epsilon, regularizer)
