"""Kernel combinations: add, multiply, convolve and pipe."""

import numpy as np

from .._validation import check_points
from ..exceptions import ValidationError
from .kernel import Kernel, fitted


def _as_gram(part, X, Y):
    if isinstance(part, Kernel):
        if X is None:
            raise ValidationError("kernel operands need the point sets X and Y")
        X = check_points(X, "X")
        Y = X if Y is None else check_points(Y, "Y")
        return fitted(part, X, Y).gram(X, Y)
    return np.asarray(part, dtype=float)


def combine_kernels(mode, parts, X=None, Y=None, Z=None, epsilon=0.0):
    """Combine kernels or Gram matrices.

    Parameters
    ----------
    mode : {"add", "multiply", "convolve", "pipe"}
    parts : sequence of two Kernel or Gram matrix operands
    X, Y : array-like, optional
        Point sets at which kernel operands are evaluated. For ``"pipe"``
        ``X`` is the training set and ``Y`` an optional pair of basis sets
        ``(Y1, Y2)``.
    Z : array-like, optional
        Mid set for ``"convolve"`` with kernel operands, query set for
        ``"pipe"``.

    Returns
    -------
    ndarray
        The combined Gram matrix; for ``"pipe"`` the projection matrix of
        shape (N_z, N_x).
    """
    if len(parts) != 2:
        raise ValidationError("combine_kernels takes exactly two operands")
    a, b = parts
    if mode in ("add", "multiply"):
        A, B = _as_gram(a, X, Y), _as_gram(b, X, Y)
        if A.shape != B.shape:
            raise ValidationError(f"non-conformable Gram shapes {A.shape} and {B.shape}")
        return A + B if mode == "add" else A * B
    if mode == "convolve":
        if isinstance(a, Kernel) or isinstance(b, Kernel):
            if Z is None:
                raise ValidationError("convolve with kernel operands needs a mid set Z")
            A, B = _as_gram(a, X, Z), _as_gram(b, Z, Y)
        else:
            A, B = np.asarray(a, float), np.asarray(b, float)
        if A.shape[1] != B.shape[0]:
            raise ValidationError(f"non-conformable Gram shapes {A.shape} and {B.shape}")
        return A @ B
    if mode == "pipe":
        if X is None:
            raise ValidationError("pipe needs the training set X")
        Y1, Y2 = (None, None) if Y is None else Y
        return pipe_projection(a, b, X, X if Z is None else Z, Y1, Y2, epsilon)
    raise ValidationError(f"unknown combination mode '{mode}'")


def pipe_projection(k1, k2, X, Z, Y1=None, Y2=None, epsilon=0.0):
    """P = P1(Z) + P2(Z) (I - P1(X)).

    The second kernel only sees the residual left by the first one, in the
    spirit of a Gram-Schmidt step.
    """
    from ..operators.regressor import projection_matrix

    X = check_points(X)
    Z = check_points(Z, "Z")
    P1z = projection_matrix(k1, X, Z, Y=Y1, epsilon=epsilon)
    P1x = projection_matrix(k1, X, X, Y=Y1, epsilon=epsilon)
    P2z = projection_matrix(k2, X, Z, Y=Y2, epsilon=epsilon)
    return P1z + P2z @ (np.eye(X.shape[0]) - P1x)
