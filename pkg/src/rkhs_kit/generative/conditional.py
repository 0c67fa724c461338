"""Conditional sampling and stable inversion built on transport matchings."""

import numpy as np

from .._rng import latent_draws
from .._validation import check_points, check_same_dim
from ..exceptions import ValidationError
from ..operators.regressor import KernelRegressor
from .generator import _check_distinct, match


class ConditionalSampler:
    """Sampler of Y given X = x through a joint decoder.

    A joint decoder maps a latent ``eta = (eta_x, eta_y)`` onto the sample
    ``[X, Y]``. A draw at ``x`` decodes ``(code(x), eta_y)`` with fresh
    ``eta_y`` and keeps the Y part.

    With ``encoder="identity"`` the conditioner is its own latent block,
    ``eta_x = x``, and only ``eta_y`` is drawn. The joint matching then pairs
    rows with nearby X values, which keeps the conditioning sharp. When
    ``eta_y`` and Y differ in dimension the Gromov-Monge descent starts from
    the row pairing, where the X blocks agree; distances alone cannot tell
    apart conditioning values related by an isometry, such as two one-hot
    labels.

    With ``encoder="refit"`` an encoder ``x -> eta_x`` is fitted by its own
    matching between a drawn ``eta_x`` sample and X. The joint matching is
    made on ``[code(X), Y]`` so that both blocks of the latent are compared
    with codes. The conditioning is only as sharp as that matching is
    monotone, which the discrepancy cost does not guarantee.

    Parameters
    ----------
    kernel : Kernel, default=None
    latent_dim : int, default=None
        Dimension of ``eta_y``; by default that of Y.
    encoder : {"identity", "refit"}, default="identity"
    encoder_dim : int, default=None
        Dimension of ``eta_x`` for ``encoder="refit"``; by default that of X.
    seed : int, default=0
        Seed of the training latent sample.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.repeat([[0.0], [1.0]], 4, axis=0)
    >>> Y = X + np.tile([[0.0], [0.1], [0.2], [0.3]], (2, 1))
    >>> draws = ConditionalSampler().fit(X, Y).sample([1.0], 5)
    >>> bool(np.all(draws > 0.5))
    True
    """

    def __init__(self, kernel=None, latent_dim=None, encoder="identity", encoder_dim=None,
                 seed=0):
        self.kernel = kernel
        self.latent_dim = latent_dim
        self.encoder = encoder
        self.encoder_dim = encoder_dim
        self.seed = seed

    def fit(self, X, Y):
        X = check_points(X, "X")
        Y = check_points(Y, "Y")
        if X.shape[0] != Y.shape[0]:
            raise ValidationError(f"X has {X.shape[0]} rows, Y has {Y.shape[0]}")
        if self.encoder not in ("identity", "refit"):
            raise ValidationError(f"encoder must be 'identity' or 'refit', got '{self.encoder}'")
        dy = Y.shape[1] if self.latent_dim is None else int(self.latent_dim)
        dx = X.shape[1] if self.encoder_dim is None else int(self.encoder_dim)
        if dy < 1 or dx < 1:
            raise ValidationError("latent dimensions must be >= 1")
        n = X.shape[0]
        W = np.hstack([X, Y])
        _check_distinct(W, "[X, Y]")
        eta_y = latent_draws(self.seed, n, dy)
        if self.encoder == "identity":
            self.encoder_ = None
            eta_x = X
            matched = W
        else:
            eta_x = latent_draws(self.seed, n, dx, stream="weights")
            uniq = np.unique(X, axis=0)
            # categorical conditioners repeat rows; encode each value once
            sigma, _ = match(self.kernel, eta_x[:uniq.shape[0]], uniq)
            self.encoder_ = KernelRegressor(kernel=self.kernel, epsilon=0.0).fit(
                uniq[sigma], eta_x[:uniq.shape[0]])
            matched = np.hstack([self._codes(X), Y])
        eta = np.hstack([eta_x, eta_y])
        init = np.arange(n) if self.encoder == "identity" else "principal"
        sigma, _ = match(self.kernel, eta, matched, init=init)
        self.latent_ = eta
        self.permutation_ = sigma
        self.decoder_ = KernelRegressor(kernel=self.kernel, epsilon=0.0).fit(eta, W[sigma])
        self.dx_, self.dy_ = eta_x.shape[1], dy
        self.n_x_features_ = X.shape[1]
        return self

    def _codes(self, x):
        return self.encoder_.predict(x).reshape(x.shape[0], -1)

    def encode(self, x):
        """Latent block ``eta_x`` of conditioning values, shape (n, dx)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return x if self.encoder_ is None else self._codes(x)

    def sample(self, x_query, n_draws, seed=1):
        """``n_draws`` samples of Y at one conditioning value, shape (n, D_y)."""
        x = np.asarray(x_query, dtype=float).reshape(1, -1)
        if x.shape[1] != self.n_x_features_:
            raise ValidationError(f"x_query needs {self.n_x_features_} entries")
        eta_x = self.encode(x)
        eta_y = latent_draws(seed, int(n_draws), self.dy_)
        Z = np.hstack([np.repeat(eta_x, eta_y.shape[0], axis=0), eta_y])
        return self.decoder_.predict(Z)[:, self.n_x_features_:]


def conditional_sample(X_cond, Y, x_query, n_draws, seed=1, kernel=None, latent_dim=None,
                       encoder="identity", fit_seed=0):
    """Draws of Y given X = x_query; see :class:`ConditionalSampler`."""
    sampler = ConditionalSampler(kernel=kernel, latent_dim=latent_dim, encoder=encoder,
                                 seed=fit_seed)
    return sampler.fit(X_cond, Y).sample(x_query, n_draws, seed=seed)


def stable_invert(X, Y, y_query, kernel=None, return_residual=False):
    """Preimages of ``y_query`` under the sampled map x^n -> y^n.

    Matching X to Y gives the reordering ``X_sigma``. The inverse is the
    composition of two interpolations, Y -> X_sigma and then X_sigma -> X,
    each closer to invertible than Y -> X directly. Repeated y values keep
    only their first sample.

    Parameters
    ----------
    X : array-like of shape (N, D_x)
    Y : array-like of shape (N, D_y)
        ``Y[n]`` is the image of ``X[n]``.
    y_query : array-like of shape (N_q, D_y)
    kernel : Kernel, default=None
    return_residual : bool, default=False
        Also return ``|f(x) - y_query|`` per query, with ``f`` the exact
        interpolant of X -> Y.

    Returns
    -------
    x : ndarray of shape (N_q, D_x)
    residual : ndarray of shape (N_q,)
        Only with ``return_residual``.
    """
    X = check_points(X, "X")
    Y = check_points(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValidationError(f"X has {X.shape[0]} rows, Y has {Y.shape[0]}")
    Q = check_points(y_query, "y_query")
    check_same_dim(Y, Q, ("Y", "y_query"))
    sigma, _ = match(kernel, Y, X)
    Xs = X[sigma]
    # a non-injective map repeats y values; keep the first of each
    keep = np.sort(np.unique(Y, axis=0, return_index=True)[1])
    smooth = KernelRegressor(kernel=kernel, epsilon=0.0).fit(Y[keep], Xs[keep])
    # Xs[n] = X[sigma[n]], so the permutation part maps X[sigma[n]] to X[n]
    perm = KernelRegressor(kernel=kernel, epsilon=0.0).fit(Xs[keep], X[keep])
    x = perm.predict(smooth.predict(Q)).reshape(Q.shape[0], X.shape[1])
    if not return_residual:
        return x
    forward = KernelRegressor(kernel=kernel, epsilon=0.0).fit(X, Y)
    fy = forward.predict(x).reshape(Q.shape[0], Y.shape[1])
    return x, np.linalg.norm(fy - Q, axis=1)
