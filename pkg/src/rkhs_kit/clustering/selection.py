"""Centroid selection by minimizing the kernel discrepancy to the data.

All stages measure the squared discrepancy with one kernel fitted on X,
so their objectives are directly comparable.
"""

import numpy as np
from scipy.optimize import minimize_scalar

from .._validation import check_points, check_same_dim
from ..exceptions import ValidationError
from ..kernels.kernel import fitted
from .model import ClusterModel
from .swap import SwapGain, swap_descent


def _kernel_on(kernel, X):
    return fitted(kernel, X)


def _check_count(n_clusters, n_points):
    if not 1 <= int(n_clusters) <= n_points:
        raise ValidationError(f"number of clusters must be in [1, {n_points}], got {n_clusters}")
    return int(n_clusters)


def discrepancy(k, Y, X, cross_x=None):
    """Squared discrepancy between Y and X for an already fitted kernel."""
    kxx = np.mean(k.gram(X)) if cross_x is None else cross_x
    return float(np.mean(k.gram(Y)) - 2.0 * np.mean(k.gram(Y, X)) + kxx)


def greedy_select(kernel, X, n_clusters, batch=1, init=None):
    """Grow a subset of X one batch at a time by the largest discrepancy drop.

    With ``Y`` the current selection of size ``n``, each candidate ``x`` is
    scored by the part of ``mmd(Y + {x}, X)`` that depends on it,

    ``(2 sum_y k(y, x) + k(x, x)) / (n+1)^2 - 2 sum_m k(x^m, x) / ((n+1) N_x)``,

    and the ``batch`` best scores are added before re-scoring. Ties go to
    the lowest index.

    Parameters
    ----------
    kernel : Kernel or None
    X : array-like of shape (N_x, D)
    n_clusters : int
    batch : int, default=1
    init : array-like of int, default=None
        Indices selected before the first round.

    Returns
    -------
    ClusterModel
        ``source_indices`` lists the selection in the order it was made.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[0.0], [1.0], [2.0]])
    >>> greedy_select(None, X, 1).source_indices.tolist()
    [1]
    """
    X = check_points(X)
    n_x = X.shape[0]
    n_clusters = _check_count(n_clusters, n_x)
    if int(batch) < 1:
        raise ValidationError("batch must be >= 1")
    k = _kernel_on(kernel, X)
    K = k.gram(X)
    row = K.sum(axis=0)
    diag = np.diag(K).copy()
    selected = [] if init is None else [int(i) for i in np.asarray(init).ravel()]
    if len(set(selected)) != len(selected) or any(not 0 <= i < n_x for i in selected):
        raise ValidationError("init must hold distinct indices into X")
    if len(selected) > n_clusters:
        raise ValidationError("init holds more indices than clusters requested")
    chosen = np.zeros(n_x, dtype=bool)
    chosen[selected] = True
    s = K[:, selected].sum(axis=1) if selected else np.zeros(n_x)
    while len(selected) < n_clusters:
        n = len(selected)
        score = (2.0 * s + diag) / (n + 1) ** 2 - 2.0 * row / ((n + 1) * n_x)
        score[chosen] = np.inf
        take = np.argsort(score, kind="stable")[:min(int(batch), n_clusters - n)]
        for j in take:
            selected.append(int(j))
            chosen[j] = True
            s += K[:, j]
    idx = np.array(selected, dtype=np.int64)
    Y = X[idx]
    return ClusterModel(centroids=Y, source_indices=idx, mmd=discrepancy(k, Y, X, np.mean(K)))


class SubsetGain(SwapGain):
    """Discrepancy gain of exchanging a selected point with an unselected one.

    ``sigma`` is a permutation of X whose first ``n_y`` entries are the
    selection.
    """

    def __init__(self, K, n_y, sigma):
        self.K = K
        self.n_y = n_y
        self.n_x = K.shape[0]
        self.row_sum = K.sum(axis=0)
        self.s = K[:, sigma[:n_y]].sum(axis=1)

    def row(self, i, js, sigma):
        K, ny = self.K, self.n_y
        a = sigma[i]
        b = sigma[np.asarray(js)]
        d_yy = (-2.0 * self.s[a] + K[a, a] + 2.0 * (self.s[b] - K[a, b]) + K[b, b]) / ny ** 2
        d_xy = -2.0 * (self.row_sum[b] - self.row_sum[a]) / (self.n_x * ny)
        return -(d_yy + d_xy)

    def __call__(self, i, j, sigma):
        return float(self.row(i, [j], sigma)[0])

    def swapped(self, i, j, sigma):
        # sigma[i] now holds the incoming point, sigma[j] the outgoing one
        self.s += self.K[:, sigma[i]] - self.K[:, sigma[j]]


def subset_refine(kernel, X, init, tol=None):
    """Improve a subset of X by swapping members with non-members.

    Parameters
    ----------
    kernel : Kernel or None
    X : array-like of shape (N_x, D)
    init : array-like of int or ClusterModel
        Initial subset, typically from :func:`greedy_select`.
    tol : float, default=None
        Minimal accepted gain, by default ``1e-13 * (1 + mean K(X, X))``.

    Returns
    -------
    ClusterModel
        The discrepancy never exceeds the initial one.
    """
    X = check_points(X)
    if isinstance(init, ClusterModel):
        init = init.source_indices
    idx = np.asarray(init, dtype=np.int64).ravel()
    n_x = X.shape[0]
    n_y = _check_count(idx.size, n_x)
    if np.unique(idx).size != n_y or idx.min() < 0 or idx.max() >= n_x:
        raise ValidationError("init must hold distinct indices into X")
    k = _kernel_on(kernel, X)
    K = k.gram(X)
    rest = np.setdiff1d(np.arange(n_x), idx)
    sigma0 = np.concatenate([idx, rest])
    if tol is None:
        tol = 1e-13 * (1.0 + abs(float(np.mean(K))))
    gain = SubsetGain(K, n_y, sigma0)
    sigma = swap_descent(gain, sigma0, rows=np.arange(n_y), cols=np.arange(n_y, n_x), tol=tol)
    out = sigma[:n_y]
    Y = X[out]
    return ClusterModel(centroids=Y, source_indices=out, mmd=discrepancy(k, Y, X, np.mean(K)))


def discrepancy_gradient(k, Y, X):
    """Gradient in Y of the squared discrepancy, shape (N_y, D).

    ``2 / N_y^2 sum_b grad k(y^m, y^b) - 2 / (N_y N_x) sum_n grad k(y^m, x^n)``,
    derivatives taken in the first argument.
    """
    n_y, n_x = Y.shape[0], X.shape[0]
    return (2.0 / n_y ** 2) * k.gradient(Y, Y).sum(axis=1) \
        - (2.0 / (n_y * n_x)) * k.gradient(Y, X).sum(axis=1)


def sharpen_descent(kernel, X, Y0, tol=1e-8, max_iter=50, return_history=False):
    """Move centroids off the data by gradient steps on the discrepancy.

    Each step searches ``lambda`` in ``(0, lambda_max]`` along
    ``Y - lambda grad J(Y)`` for the smallest gradient norm, with a bounded
    scalar minimizer. ``lambda_max`` is twice the Cauchy step estimated from
    the change of the gradient over a probe step. A step is accepted only if
    it lowers the discrepancy; otherwise the discrepancy itself is
    minimized along the ray, and the descent stops when that fails too.

    Parameters
    ----------
    kernel : Kernel or None
        Must be differentiable.
    X : array-like of shape (N_x, D)
    Y0 : array-like of shape (N_y, D) or ClusterModel
    tol : float, default=1e-8
        Stop when the gradient norm falls below ``tol``.
    max_iter : int, default=50
    return_history : bool, default=False
        Also return the discrepancy after every accepted step.

    Returns
    -------
    ClusterModel
    history : list of float
        Only with ``return_history``.
    """
    X = check_points(X)
    if isinstance(Y0, ClusterModel):
        Y0 = Y0.centroids
    Y = check_points(Y0, "Y0").copy()
    check_same_dim(X, Y, ("X", "Y0"))
    k = _kernel_on(kernel, X)
    k.require_differentiable()
    kxx = float(np.mean(k.gram(X)))

    def J(Z):
        return discrepancy(k, Z, X, kxx)

    def grad(Z):
        return discrepancy_gradient(k, Z, X)

    spread = float(np.max(np.ptp(X, axis=0))) or 1.0
    current = J(Y)
    history = [current]
    for _ in range(int(max_iter)):
        g = grad(Y)
        gnorm = float(np.linalg.norm(g))
        if not gnorm > tol:
            break
        probe = 1e-3 * spread / float(np.max(np.abs(g)))
        curvature = float(np.sum(g * (g - grad(Y - probe * g)))) / probe
        lam_max = 2.0 * gnorm ** 2 / curvature if curvature > 0 else 1e3 * probe
        lam_max = min(lam_max, spread / float(np.max(np.abs(g))))
        best = None
        for objective in (lambda lam: float(np.linalg.norm(grad(Y - lam * g))),
                          lambda lam: J(Y - lam * g)):
            res = minimize_scalar(objective, bounds=(0.0, lam_max), method="bounded",
                                  options={"xatol": 1e-3 * lam_max})
            trial = J(Y - res.x * g)
            if trial < current:
                best = (res.x, trial)
                break
        if best is None:
            break
        Y = Y - best[0] * g
        current = best[1]
        history.append(current)
    model = ClusterModel(centroids=Y, mmd=current)
    return (model, history) if return_history else model
