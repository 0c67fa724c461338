"""Assignments of points to centroids and cluster quality measures."""

import numpy as np

from .._validation import check_points, check_same_dim
from ..exceptions import ValidationError
from ..kernels.discrepancy import distance_matrix
from ..kernels.kernel import fitted
from ..transport.lsap import lsap
from .model import ClusterModel
from .swap import SwapGain, swap_descent


def _centroids(model):
    return model.centroids if isinstance(model, ClusterModel) else check_points(model, "centroids")


def _distances(X, Y, metric, kernel):
    if metric == "euclidean":
        diff = X[:, None, :] - Y[None, :, :]
        return np.einsum("nyd,nyd->ny", diff, diff)
    if metric == "kernel-discrepancy":
        return distance_matrix(fitted(kernel, X), X, Y)
    raise ValidationError(f"unknown metric '{metric}'")


def assign(X, model, metric="euclidean", kernel=None):
    """Index of the nearest centroid for every row of X (ties to the lowest).

    ``metric="kernel-discrepancy"`` uses ``d_k(x, y)`` with the kernel
    fitted on X.
    """
    X = check_points(X)
    Y = _centroids(model)
    check_same_dim(X, Y, ("X", "centroids"))
    return np.argmin(_distances(X, Y, metric, kernel), axis=1)


def inertia(X, model, labels=None):
    """sum_n |x^n - y^{label(n)}|^2, labels defaulting to the nearest centroid."""
    X = check_points(X)
    Y = _centroids(model)
    check_same_dim(X, Y, ("X", "centroids"))
    if labels is None:
        labels = assign(X, Y)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (X.shape[0],) or labels.min() < 0 or labels.max() >= Y.shape[0]:
        raise ValidationError("labels must give one centroid index per row of X")
    diff = X - Y[labels]
    return float(np.sum(diff * diff))


def semisup_predict(model, centroid_labels, Z, metric="euclidean", kernel=None):
    """Label of the nearest centroid for every row of Z."""
    Y = _centroids(model)
    centroid_labels = np.asarray(centroid_labels)
    if centroid_labels.shape[0] != Y.shape[0]:
        raise ValidationError("need one label per centroid")
    return centroid_labels[assign(Z, Y, metric, kernel)]


class BalancedGain(SwapGain):
    """Gain of exchanging the slots of two points; slot c feeds cluster c % N_y."""

    def __init__(self, D):
        self.D = D
        self.n_y = D.shape[0]

    def row(self, i, js, sigma):
        D, ny = self.D, self.n_y
        js = np.asarray(js)
        li = sigma[i] % ny
        lj = sigma[js] % ny
        return D[li, i] + D[lj, js] - D[lj, i] - D[li, js]

    def __call__(self, i, j, sigma):
        return float(self.row(i, [j], sigma)[0])


def balanced_assign(distance, method="lsap", tol=1e-12):
    """Assignment with cluster sizes differing by at most one.

    Point n goes to cluster ``sigma[n] % N_y`` for a permutation ``sigma``
    of the N_x slots, chosen to minimize ``sum_n D[sigma[n] % N_y, n]``.

    Parameters
    ----------
    distance : array-like of shape (N_y, N_x)
        ``D[i, n]`` is the distance between centroid i and point n.
    method : {"lsap", "swap"}, default="lsap"
        ``"lsap"`` solves the slot problem exactly as an assignment;
        ``"swap"`` runs pairwise-exchange descent from the modulo
        assignment. Either way no improving exchange remains.

    Returns
    -------
    labels : ndarray of shape (N_x,)
    """
    D = np.asarray(distance, dtype=float)
    if D.ndim != 2 or D.shape[0] < 1 or D.shape[1] < 1:
        raise ValidationError(f"distance must be a non-empty 2-D matrix, got shape {D.shape}")
    if not np.all(np.isfinite(D)):
        raise ValidationError("distance has non-finite entries")
    n_y, n_x = D.shape
    slots = np.arange(n_x) % n_y
    if method == "lsap":
        sigma, _ = lsap(D[slots, :].T)
    elif method == "swap":
        sigma = np.arange(n_x)
    else:
        raise ValidationError(f"unknown method '{method}'")
    sigma = swap_descent(BalancedGain(D), sigma, tol=tol, upper=True)
    return sigma % n_y
