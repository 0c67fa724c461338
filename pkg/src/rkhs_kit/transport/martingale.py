"""Bistochastic approximation of martingale optimal transport."""

from dataclasses import dataclass, field

import numpy as np

from .._validation import check_points, check_same_dim
from ..exceptions import ConvergenceError, ValidationError
from ..kernels.discrepancy import distance_matrix
from ..kernels.kernel import fitted
from .lsap import lsap


@dataclass
class MartingalePlan:
    """Output of :func:`martingale_ot`.

    Attributes
    ----------
    plan : ndarray of shape (N, N)
        Plan indexed by the original rows of X and Y; rows sum to one.
    permutation : ndarray of shape (N,)
        Initial matching, row i of X paired with row ``permutation[i]`` of Y.
    residuals : list of float
        Relative barycenter residual ``|X - Pi Y| / |X|`` after each step,
        the first entry being the matched starting point.
    n_iter : int
    converged : bool
    min_entry : float
        Smallest plan entry; negative values are allowed and flagged.
    negative : bool
    """

    plan: np.ndarray
    permutation: np.ndarray
    residuals: list = field(default_factory=list)
    n_iter: int = 0
    converged: bool = False
    min_entry: float = 0.0
    negative: bool = False

    @property
    def residual(self):
        return self.residuals[-1]

    def report(self):
        return {"iterations": self.n_iter, "converged": self.converged,
                "residual": self.residual, "min_entry": self.min_entry,
                "negative": self.negative}


def _relative(a, b):
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a) / nb) if nb > 0 else float(np.linalg.norm(a))


def martingale_ot(X, Y, kernel=None, tol=1e-10, max_iter=100, clip=False, strict=False):
    """Fixed-point martingale transport plan between equal-size samples.

    Both samples are centered, Y is matched to X by an assignment under the
    point discrepancy ``d_k(x, y)``, and the plan is grown from the identity
    by the steps ``Pi = I + t (X - Y^n) (Y^n)^T``, ``Y^{n+1} = Pi Y^n`` with
    the exact line-search step
    ``t = |(X - Y) Y^T|^2 / |(X - Y) Y^T Y|^2``.
    Every step keeps rows and columns summing to one because the samples
    have zero mean.

    Parameters
    ----------
    X, Y : array-like of shape (N, D)
    kernel : Kernel, default=None
        Kernel of the matching cost; fitted on both samples when unfitted.
    tol : float, default=1e-10
        Stop once ``|Y^{n+1} - Y^n| / |Y^n|`` (Frobenius) is below ``tol``.
    max_iter : int, default=100
    clip : bool, default=False
        Clip negative entries to zero and renormalize the rows. Off by
        default, in which case negativity is only reported.
    strict : bool, default=False
        Raise :class:`ConvergenceError` instead of returning an unconverged
        plan.

    Returns
    -------
    MartingalePlan
    """
    X = check_points(X, "X", min_rows=1)
    Y = check_points(Y, "Y", min_rows=1)
    check_same_dim(X, Y)
    if X.shape[0] != Y.shape[0]:
        raise ValidationError(f"X and Y need equal sizes, got {X.shape[0]} and {Y.shape[0]}")
    n = X.shape[0]
    k = fitted(kernel, X, Y)
    sigma, _ = lsap(distance_matrix(k, X, Y))
    X0 = X - X.mean(axis=0)
    Yn = Y[sigma] - Y.mean(axis=0)
    Pi = np.eye(n)
    residuals = [_relative(X0 - Yn, X0)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        R = X0 - Yn
        RYt = R @ Yn.T
        RG = R @ (Yn.T @ Yn)
        den = float(np.sum(RG * RG))
        if den == 0.0:
            # R = 0 is exact; otherwise the step is undefined and we stop
            converged = not np.any(R)
            it -= 1
            break
        t = float(np.sum(RYt * RYt)) / den
        step = np.eye(n) + t * RYt
        Y_next = step @ Yn
        Pi = step @ Pi
        change = _relative(Y_next - Yn, Yn)
        Yn = Y_next
        residuals.append(_relative(X0 - Yn, X0))
        if change <= tol:
            converged = True
            break
    plan = np.empty_like(Pi)
    plan[:, sigma] = Pi
    if clip:
        plan = np.clip(plan, 0.0, None)
        plan /= plan.sum(axis=1, keepdims=True)
    min_entry = float(plan.min())
    result = MartingalePlan(plan=plan, permutation=sigma, residuals=residuals, n_iter=it,
                            converged=converged, min_entry=min_entry, negative=min_entry < 0)
    if strict and not converged:
        raise ConvergenceError("martingale transport iterations did not converge",
                               **result.report())
    return result
