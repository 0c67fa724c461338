"""Centroid container shared by the clustering algorithms."""

from dataclasses import dataclass

import numpy as np


@dataclass
class ClusterModel:
    """Centroids with optional provenance and assignment.

    Attributes
    ----------
    centroids : ndarray of shape (N_y, D)
    source_indices : ndarray of shape (N_y,) or None
        Rows of X the centroids were taken from, when they are a subset.
    assignment : ndarray of shape (N_x,) or None
        Cluster index in ``[0, N_y)`` of every training point.
    mmd : float or None
        Squared discrepancy between centroids and training set.
    """

    centroids: np.ndarray
    source_indices: np.ndarray = None
    assignment: np.ndarray = None
    mmd: float = None

    @property
    def n_clusters(self):
        return self.centroids.shape[0]
