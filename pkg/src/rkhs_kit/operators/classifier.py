"""Softmax kernel classifier fitted on log-probabilities."""

import numpy as np
from scipy.special import softmax
from sklearn.base import BaseEstimator, ClassifierMixin

from .._validation import check_points, check_values
from ..exceptions import ValidationError
from ..kernels.maps import require_fitted
from ._core import DEFAULT_EPSILON
from .regressor import KernelRegressor


class KernelClassifier(ClassifierMixin, BaseEstimator):
    """Kernel regressor on log-probabilities followed by a softmax.

    ``fit`` takes either a probability matrix of shape (N, C) or a vector of
    class labels, which is one-hot encoded and smoothed by
    ``label_smoothing`` so the logarithm stays finite.

    Parameters
    ----------
    kernel : Kernel, default=None
    epsilon : float, default=1e-8
    label_smoothing : float, default=1e-3
        Mass spread over the other classes when integer labels are given.

    Attributes
    ----------
    regressor_ : KernelRegressor
        Fit of log(pi).
    classes_ : ndarray
    """

    def __init__(self, kernel=None, epsilon=DEFAULT_EPSILON, label_smoothing=1e-3):
        self.kernel = kernel
        self.epsilon = epsilon
        self.label_smoothing = label_smoothing

    def fit(self, X, y):
        X = check_points(X)
        y_arr = np.asarray(y)
        if y_arr.ndim == 2 and y_arr.shape[1] > 1:
            P, _ = check_values(y_arr, X.shape[0], "piX")
            self.classes_ = np.arange(P.shape[1])
        else:
            self.classes_, codes = np.unique(y_arr.ravel(), return_inverse=True)
            c = len(self.classes_)
            s = float(self.label_smoothing) if c > 1 else 0.0
            P = np.full((X.shape[0], c), s / max(c - 1, 1))
            P[np.arange(X.shape[0]), codes] = 1.0 - s
        if np.any(P <= 0.0):
            raise ValidationError("probabilities must be strictly positive (log undefined at 0)")
        if np.max(np.abs(P.sum(axis=1) - 1.0)) > 1e-9:
            raise ValidationError("probability rows must sum to 1")
        self.regressor_ = KernelRegressor(kernel=self.kernel, epsilon=self.epsilon).fit(
            X, np.log(P))
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, Z):
        require_fitted(self, "classifier")
        return softmax(self.regressor_.predict_raw(Z), axis=1)

    def predict(self, Z):
        return self.classes_[np.argmax(self.predict_proba(Z), axis=1)]

    def gradient(self, Z):
        """d pi^j / d z_d, shape (N_z, D, C), via pi^j (delta_ij - pi^i)."""
        pi = self.predict_proba(Z)
        dlogit = self.regressor_.gradient(Z)
        jac = pi[:, :, None] * (np.eye(pi.shape[1])[None] - pi[:, None, :])
        # jac[z, j, i] = pi^j (delta_ij - pi^i) = d pi^j / d logit^i
        return np.einsum("zdi,zji->zdj", dlogit, jac)


def classifier_fit(kernel, X, piX, epsilon=DEFAULT_EPSILON):
    return KernelClassifier(kernel=kernel, epsilon=epsilon).fit(X, piX)


def classifier_predict(model, Z):
    return model.predict_proba(Z)


def classifier_gradient(model, Z):
    return model.gradient(Z)
