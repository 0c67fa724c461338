"""Estimator interface to the discrepancy clustering pipeline."""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .._validation import check_points
from ..exceptions import ValidationError
from ..kernels.discrepancy import distance_matrix
from ..kernels.kernel import fitted
from ..kernels.maps import require_fitted
from .assignment import assign, balanced_assign
from .selection import greedy_select, sharpen_descent, subset_refine

METHODS = ("greedy", "refine", "sharp")


class DiscrepancyClustering(ClusterMixin, BaseEstimator):
    """Centroids minimizing the kernel discrepancy to the training set.

    The stages run in order greedy, refine, sharp and ``method`` selects
    where to stop.

    Parameters
    ----------
    n_clusters : int, default=8
    kernel : Kernel, default=None
        ``None`` uses the default kernel, fitted on the training set.
    method : {"greedy", "refine", "sharp"}, default="sharp"
    batch : int, default=1
        Greedy batch size.
    balanced : bool, default=False
        Assign training points with equal cluster sizes (within one).
    metric : {"euclidean", "kernel-discrepancy"}, default="euclidean"
        Distance used for the assignment.

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (n_clusters, D)
    labels_ : ndarray of shape (N,)
    source_indices_ : ndarray or None
        Training rows used as centroids; None after the sharp stage.
    mmd_ : float
        Squared discrepancy between centroids and training set.
    stage_mmd_ : dict
        Discrepancy after each stage that ran.
    """

    def __init__(self, n_clusters=8, kernel=None, method="sharp", batch=1, balanced=False,
                 metric="euclidean"):
        self.n_clusters = n_clusters
        self.kernel = kernel
        self.method = method
        self.batch = batch
        self.balanced = balanced
        self.metric = metric

    def fit(self, X, y=None):
        X = check_points(X)
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}, got '{self.method}'")
        k = fitted(self.kernel, X)
        model = greedy_select(k, X, self.n_clusters, batch=self.batch)
        stages = {"greedy": model.mmd}
        if self.method in ("refine", "sharp"):
            model = subset_refine(k, X, model)
            stages["refine"] = model.mmd
        if self.method == "sharp":
            model = sharpen_descent(k, X, model)
            stages["sharp"] = model.mmd
        self.cluster_centers_ = model.centroids
        self.source_indices_ = model.source_indices
        self.mmd_ = model.mmd
        self.stage_mmd_ = stages
        self.kernel_ = k
        self.n_features_in_ = X.shape[1]
        if self.balanced:
            if self.metric == "kernel-discrepancy":
                D = distance_matrix(k, self.cluster_centers_, X)
            else:
                diff = self.cluster_centers_[:, None, :] - X[None, :, :]
                D = np.einsum("ynd,ynd->yn", diff, diff)
            self.labels_ = balanced_assign(D)
        else:
            self.labels_ = self.predict(X)
        return self

    def predict(self, X):
        require_fitted(self, "clustering")
        return assign(X, self.cluster_centers_, self.metric, self.kernel_)
