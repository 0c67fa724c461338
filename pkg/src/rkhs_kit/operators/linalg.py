"""Linear solves used by every kernel fit."""

import warnings

import numpy as np
import scipy.linalg as sla

from ..exceptions import IllConditionedError

JITTER_START = 1e-12
JITTER_STOP = 1e-4


def _try_solve(A, B):
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            X = sla.solve(A, B, assume_a="sym", check_finite=False)
        except (sla.LinAlgError, sla.LinAlgWarning, ValueError):
            return None
    if not np.all(np.isfinite(X)):
        return None
    return X


def sym_solve(A, B, jitter=True):
    """Solve ``A X = B`` for symmetric ``A``.

    A symmetric indefinite (Bunch-Kaufman) factorization is tried first. If
    it reports a singular or numerically singular matrix (reciprocal
    condition below machine precision), a diagonal jitter
    ``1e-12 * trace(A)/N`` is added and grown by factors of ten up to
    ``1e-4 * trace(A)/N``.

    Parameters
    ----------
    A : ndarray of shape (N, N)
    B : ndarray of shape (N,) or (N, K)
    jitter : bool, default=True
        Disable to raise immediately instead of regularizing.

    Returns
    -------
    X : ndarray shaped like ``B``

    Raises
    ------
    IllConditionedError
        When the system stays singular at the largest jitter.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = A.shape[0]
    if n == 0:
        return np.zeros_like(B)
    X = _try_solve(A, B)
    if X is not None:
        return X
    scale = abs(np.trace(A)) / n
    if not scale > 0:
        scale = max(float(np.max(np.abs(A))), 1.0)
    level = JITTER_START
    while jitter and level <= JITTER_STOP * (1 + 1e-9):
        X = _try_solve(A + level * scale * np.eye(n), B)
        if X is not None:
            return X
        level *= 10.0
    raise IllConditionedError(
        "linear system is singular after maximal diagonal jitter",
        condition_estimate=_cond(A), size=n, max_jitter=JITTER_STOP * scale)


def _cond(A):
    try:
        c = float(np.linalg.cond(A))
    except np.linalg.LinAlgError:
        c = float("inf")
    return c if np.isfinite(c) else "inf"


def solve(A, B):
    """General (LU) solve raising :class:`IllConditionedError` on singular input."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            X = sla.solve(A, B, check_finite=False)
        except (sla.LinAlgError, sla.LinAlgWarning):
            X = None
    if X is None or not np.all(np.isfinite(X)):
        raise IllConditionedError("matrix is singular to working precision",
                                  condition_estimate=_cond(A), size=A.shape[0])
    return X


def pinv_sym(A, rtol=1e-10):
    """Least-squares pseudo-inverse of a symmetric matrix.

    Eigenvalues below ``rtol * max|eigenvalue|`` are treated as zero.
    """
    A = 0.5 * (A + A.T)
    return sla.pinvh(A, atol=0.0, rtol=rtol)
