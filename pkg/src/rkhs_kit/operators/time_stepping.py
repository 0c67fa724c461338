"""Theta-scheme evolution operators and finite-difference weights."""

from math import factorial

import numpy as np

from .._validation import check_square
from ..exceptions import IllConditionedError, ValidationError
from .linalg import solve


def theta_generator(A, theta, tau):
    """B = (I - tau theta A)^{-1} (I + tau (1 - theta) A).

    ``theta = 0`` is explicit Euler, ``0.5`` Crank-Nicolson and ``1``
    implicit Euler for du/dt = A u.
    """
    A = check_square(A, "A")
    if not 0.0 <= theta <= 1.0:
        raise ValidationError("theta must lie in [0, 1]")
    if not tau > 0:
        raise ValidationError("tau must be > 0")
    eye = np.eye(A.shape[0])
    return solve(eye - tau * theta * A, eye + tau * (1.0 - theta) * A)


def theta_step(B, u):
    return B @ np.asarray(u, dtype=float)


def evolve(B, u0, steps):
    """Apply ``B`` repeatedly; returns the (steps + 1, ...) trajectory."""
    u = np.asarray(u0, dtype=float)
    out = [u]
    for _ in range(int(steps)):
        u = B @ u
        out.append(u)
    return np.array(out)


def vandermonde_weights(nodes, y, p_coeffs):
    """Weights beta with sum_k beta_k (x_k - y)^i = i! p_i for i < q.

    Examples
    --------
    >>> vandermonde_weights([-1.0, 0.0, 1.0], 0.0, [0.0, 0.0, 1.0])
    array([ 1., -2.,  1.])
    """
    x = np.asarray(nodes, dtype=float).ravel()
    p = np.asarray(p_coeffs, dtype=float).ravel()
    q = x.size
    if q < 1 or p.size != q:
        raise ValidationError("need q >= 1 nodes and q coefficients")
    if np.unique(x).size != q:
        raise IllConditionedError("coincident nodes make the Vandermonde system singular")
    h = x - float(y)
    V = h[None, :] ** np.arange(q)[:, None]
    rhs = np.array([factorial(i) for i in range(q)], dtype=float) * p
    return solve(V, rhs)
