"""Kernel differential operators on point clouds.

The gradient operator maps values at X to gradients at Z,
``grad_k = (grad K)(Z, Y) A`` with ``A`` the fit matrix (``K(X, X)^{-1}``
when Y = X). The divergence is its transpose and the Laplace-Beltrami
matrix is ``grad_k^T grad_k``, which is symmetric positive semi-definite
(it is minus the usual Laplacian).
"""

import numpy as np
from sklearn.base import clone

from .._validation import check_points, check_same_dim, check_values
from ..exceptions import ValidationError
from ..kernels.kernel import default_kernel
from ._core import fit_matrix, resolve_basis
from .linalg import pinv_sym, sym_solve

PINV_RTOL = 1e-10


def _setup(kernel, X, Y):
    X = check_points(X)
    k = clone(kernel if kernel is not None else default_kernel()).fit(X)
    k.require_differentiable()
    Y, same = resolve_basis(X, Y)
    return k, X, Y, same


def gradient_operator(kernel, X, Y=None, Z=None, epsilon=0.0):
    """Tensor G of shape (N_z, D, N_x) with G f(X) the gradient at Z."""
    k, X, Y, same = _setup(kernel, X, Y)
    Z = X if Z is None else check_points(Z, "Z")
    check_same_dim(X, Z, ("X", "Z"))
    A = fit_matrix(k, X, Y, same, epsilon)
    return np.einsum("zyd,yn->zdn", k.gradient(Z, Y), A)


def hessian_operator(kernel, X, Y=None, Z=None, epsilon=0.0):
    """Tensor of shape (N_z, D, D, N_x) mapping values at X to Hessians at Z."""
    k, X, Y, same = _setup(kernel, X, Y)
    Z = X if Z is None else check_points(Z, "Z")
    A = fit_matrix(k, X, Y, same, epsilon)
    return np.einsum("zyde,yn->zden", k.hessian(Z, Y), A)


def _field(field, n_z, D):
    v = np.asarray(field, dtype=float)
    if v.ndim == 2:
        v = v[:, :, None]
    if v.ndim != 3 or v.shape[:2] != (n_z, D):
        raise ValidationError(f"field must have shape ({n_z}, {D}[, D_f]), got {v.shape}")
    return v


def divergence(kernel, X, field, Y=None, Z=None, epsilon=0.0):
    """Transpose pairing of the gradient: returns (N_x, D_f).

    Satisfies <grad_k u, v>_Z = <u, div_k v>_X for all u, v.
    """
    G = gradient_operator(kernel, X, Y, Z, epsilon)
    v = _field(field, G.shape[0], G.shape[1])
    out = np.einsum("zdn,zdf->nf", G, v)
    return out[:, 0] if np.ndim(field) == 2 else out


def laplace_beltrami(kernel, X, Y=None, Z=None, epsilon=0.0):
    """Symmetric PSD matrix grad_k^T grad_k of shape (N_x, N_x)."""
    G = gradient_operator(kernel, X, Y, Z, epsilon)
    L = np.einsum("zdn,zdm->nm", G, G)
    return 0.5 * (L + L.T)


def inv_laplace(kernel, X, fX, Y=None, Z=None, epsilon=0.0, rtol=PINV_RTOL):
    """Least-squares pseudo-inverse of the Laplace-Beltrami matrix applied to fX."""
    X = check_points(X)
    F, was_1d = check_values(fX, X.shape[0], "fX")
    out = pinv_sym(laplace_beltrami(kernel, X, Y, Z, epsilon), rtol) @ F
    return out[:, 0] if was_1d else out


def helmholtz_hodge(kernel, X, u, Y=None, epsilon=0.0, rtol=PINV_RTOL):
    """Split a vector field at X into a gradient part and a solenoidal part.

    Parameters
    ----------
    kernel : Kernel
    X : array-like of shape (N, D)
    u : array-like of shape (N, D)
        Field sampled at X.

    Returns
    -------
    h : ndarray of shape (N,)
        Potential, h = Laplace^+ (div u).
    zeta : ndarray of shape (N, D)
        Solenoidal remainder u - grad h; it is orthogonal to grad h.
    """
    X = check_points(X)
    G = gradient_operator(kernel, X, Y, None, epsilon)
    u = np.asarray(u, dtype=float)
    if u.shape != X.shape:
        raise ValidationError(f"u must have shape {X.shape}, got {u.shape}")
    L = np.einsum("zdn,zdm->nm", G, G)
    div = np.einsum("zdn,zd->n", G, u)
    h = pinv_sym(L, rtol) @ div
    zeta = u - np.einsum("zdn,n->zd", G, h)
    return h, zeta


def leray(kernel, X, u, Y=None, epsilon=0.0, rtol=PINV_RTOL):
    """Divergence-free part of ``u`` (the solenoidal term of the split)."""
    return helmholtz_hodge(kernel, X, u, Y, epsilon, rtol)[1]


def leray_matrix(kernel, X, Y=None, epsilon=0.0, rtol=PINV_RTOL):
    """I - grad_k Laplace^+ grad_k^T as an (N D) x (N D) matrix."""
    X = check_points(X)
    G = gradient_operator(kernel, X, Y, None, epsilon)
    n, D, _ = G.shape
    Gm = G.reshape(n * D, -1)
    L = Gm.T @ Gm
    return np.eye(n * D) - Gm @ pinv_sym(L, rtol) @ Gm.T


def boundary_project(kernel, X, Z_boundary, phiZ, uX, epsilon=0.0):
    """Closest values at X whose extrapolation to Z matches phi(Z).

    Solves min |v - u(X)|^2 subject to P v = phi(Z), with P the projection
    operator from X to the boundary points Z:
    ``v = u - P^T (P P^T)^{-1} (P u - phi)``.
    """
    from .regressor import projection_matrix

    X = check_points(X)
    Zb = check_points(Z_boundary, "Z_boundary")
    U, was_1d = check_values(uX, X.shape[0], "uX")
    Phi, _ = check_values(phiZ, Zb.shape[0], "phiZ")
    P = projection_matrix(kernel, X, Zb, epsilon=epsilon)
    correction = P.T @ sym_solve(P @ P.T, P @ U - Phi)
    out = U - correction
    return out[:, 0] if was_1d else out
