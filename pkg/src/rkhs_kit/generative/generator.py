"""Transport-based encoder-decoder generators."""

import numpy as np
from sklearn.base import BaseEstimator

from .._rng import latent_draws, next_seed
from .._validation import check_points
from ..exceptions import ValidationError
from ..kernels.discrepancy import distance_matrix
from ..kernels.kernel import fitted
from ..kernels.maps import require_fitted
from ..operators.regressor import KernelRegressor
from ..transport.gromov import gromov_monge
from ..transport.lsap import lsap


def _check_distinct(A, name):
    if np.unique(A, axis=0).shape[0] != A.shape[0]:
        raise ValidationError(f"{name} has duplicate rows")


def match(kernel, X, Y, init="principal"):
    """Permutation pairing row i of X with row ``sigma[i]`` of Y, and the mode.

    Equal dimensions use an assignment with point cost ``d_k(x, y)``, the
    kernel being fitted on both sets. Otherwise the two discrepancy
    matrices are matched by Gromov-Monge descent started from ``init``.
    """
    if X.shape[1] == Y.shape[1]:
        sigma, _ = lsap(distance_matrix(fitted(kernel, X, Y), X, Y))
        return sigma, "monge"
    DX = distance_matrix(fitted(kernel, X), X)
    DY = distance_matrix(fitted(kernel, Y), Y)
    return gromov_monge(0.5 * (DX + DX.T), 0.5 * (DY + DY.T), init=init), "gromov-monge"


class TransportGenerator(BaseEstimator):
    """Decoder from a latent sample to data, aligned by optimal matching.

    ``fit`` pairs every latent point with a data point (assignment when the
    dimensions agree, Gromov-Monge otherwise) and interpolates the pairs
    with an exact kernel regression, so latent training points map onto
    the data exactly.

    Parameters
    ----------
    kernel : Kernel, default=None
        Kernel of the matching cost and of the decoder.
    latent_dim : int, default=1
        Latent dimension when the latent sample is drawn by ``fit``.
    latent_law : {"normal", "uniform"}, default="normal"
    seed : int, default=0
        Seed of the latent stream.

    Attributes
    ----------
    latent_ : ndarray of shape (N, D_x)
    data_sigma_ : ndarray of shape (N, D_y)
        Data reordered so that row i is the image of ``latent_[i]``.
    permutation_ : ndarray of shape (N,)
    mode_ : {"monge", "gromov-monge"}
    regressor_ : KernelRegressor

    Examples
    --------
    >>> import numpy as np
    >>> Y = np.array([[0.0], [3.0], [1.0]])
    >>> gen = TransportGenerator().fit(Y, latent=np.array([[0.0], [1.0], [2.0]]))
    >>> gen.data_sigma_.ravel().tolist()
    [0.0, 1.0, 3.0]
    """

    def __init__(self, kernel=None, latent_dim=1, latent_law="normal", seed=0):
        self.kernel = kernel
        self.latent_dim = latent_dim
        self.latent_law = latent_law
        self.seed = seed

    def fit(self, Y, latent=None):
        Y = check_points(Y, "Y")
        if latent is None:
            latent = latent_draws(self.seed, Y.shape[0], int(self.latent_dim), self.latent_law)
        X = check_points(latent, "latent")
        if X.shape[0] != Y.shape[0]:
            raise ValidationError(f"latent has {X.shape[0]} rows, data has {Y.shape[0]}")
        _check_distinct(X, "latent")
        _check_distinct(Y, "Y")
        sigma, mode = match(self.kernel, X, Y)
        self.latent_ = X
        self.data_sigma_ = Y[sigma]
        self.permutation_ = sigma
        self.mode_ = mode
        self.regressor_ = KernelRegressor(kernel=self.kernel, epsilon=0.0).fit(X, self.data_sigma_)
        self.n_features_in_ = X.shape[1]
        return self

    def generate(self, Z):
        """Decoder values at latent points Z."""
        require_fitted(self, "generator")
        return self.regressor_.predict(Z)

    def sample(self, n, seed=None):
        """Decode ``n`` fresh latent draws from the latent law."""
        require_fitted(self, "generator")
        seed = next_seed(self.seed) if seed is None else seed
        Z = latent_draws(seed, int(n), self.latent_.shape[1], self.latent_law)
        return self.generate(Z)


def sample_fit(X_latent, Y, kernel=None):
    """Functional form of :meth:`TransportGenerator.fit`."""
    return TransportGenerator(kernel=kernel).fit(Y, latent=X_latent)


def generate(gen, Z):
    return gen.generate(Z)
