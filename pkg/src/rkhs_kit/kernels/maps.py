"""Data-dependent rescaling maps applied before a base kernel.

All maps act coordinate-wise, so their Jacobian is diagonal. Each map
exposes ``jet(X)`` returning the mapped points together with the first and
second coordinate-wise derivatives, which the kernel uses for analytic
gradients and Hessians through the chain rule.
"""

import numpy as np
from scipy.special import erf, erfinv
from sklearn.base import BaseEstimator, TransformerMixin, clone
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .._validation import check_points
from ..exceptions import ConfigurationError, DegenerateScaleError, ValidationError

ERFINV_CLAMP = 1.0 - 1e-9


def require_fitted(estimator, what):
    try:
        check_is_fitted(estimator)
    except NotFittedError:
        raise ConfigurationError(f"{what} must be fitted before use") from None


def _positive_or_one(scale):
    scale = np.asarray(scale, dtype=float)
    return np.where(scale > 0.0, scale, 1.0)


class _Map(TransformerMixin, BaseEstimator):
    name = None
    stateful = True

    def fit(self, X, y=None):
        X = check_points(X)
        self._fit(X)
        self.n_features_in_ = X.shape[1]
        return self

    def _fit(self, X):
        pass

    def transform(self, X):
        return self.jet(X)[0]

    def jet(self, X):
        """Return ``(S(X), S'(X), S''(X))`` evaluated coordinate-wise."""
        if self.stateful:
            require_fitted(self, f"map '{self.name}'")
        X = check_points(X)
        return self._jet(X)

    def to_json(self):
        return self.name


class _Affine(_Map):
    """S(x) = a * x + b with per-column ``a`` and ``b``."""

    def _jet(self, X):
        a, b = self._coefficients()
        S = X * a + b
        return S, np.broadcast_to(a, X.shape).copy(), np.zeros_like(X)


class StdDevMap(_Affine):
    """x / sigma with sigma the per-column population standard deviation."""

    name = "std-dev"

    def _fit(self, X):
        self.sigma_ = _positive_or_one(np.std(X, axis=0))

    def _coefficients(self):
        return 1.0 / self.sigma_, 0.0


class MeanDistanceMap(_Affine):
    """x / sqrt(alpha), alpha the mean squared distance over all pairs."""

    name = "mean-distance"

    def _fit(self, X):
        n = X.shape[0]
        # sum_{i,k} |x_i - x_k|^2 = 2 n sum_i |x_i - mean|^2
        centered = X - X.mean(axis=0)
        alpha = 2.0 * n * np.sum(centered * centered) / n ** 2
        self.alpha_ = float(_positive_or_one(alpha))

    def _coefficients(self):
        return 1.0 / np.sqrt(self.alpha_), 0.0


class MinDistanceMap(_Affine):
    """x / sqrt(alpha), alpha the mean squared nearest-neighbour distance."""

    name = "min-distance"

    def _fit(self, X):
        if X.shape[0] < 2:
            raise DegenerateScaleError("min-distance map needs at least two rows")
        sq = np.sum(X * X, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * X @ X.T
        np.fill_diagonal(d2, np.inf)
        alpha = float(np.mean(np.maximum(d2.min(axis=1), 0.0)))
        if not alpha > 0.0:
            raise DegenerateScaleError("min-distance map: all rows are identical")
        self.alpha_ = alpha

    def _coefficients(self):
        return 1.0 / np.sqrt(self.alpha_), 0.0


class UnitCubeMap(_Affine):
    """Maps each column onto [0.5/N, 1 - 0.5/N], the midpoint quantile grid."""

    name = "unit-cube"

    def _fit(self, X):
        self.min_ = X.min(axis=0)
        self.alpha_ = _positive_or_one(X.max(axis=0) - self.min_)
        self.n_samples_ = X.shape[0]

    def _coefficients(self):
        n = self.n_samples_
        a = (n - 1) / (n * self.alpha_)
        return a, 0.5 / n - self.min_ * a


class BandwidthMap(_Affine):
    """S(x) = h * x for a user supplied h > 0."""

    name = "bandwidth"
    stateful = False

    def __init__(self, h=1.0):
        self.h = h

    def _fit(self, X):
        if not float(self.h) > 0.0:
            raise ValidationError("bandwidth h must be > 0")

    def _jet(self, X):
        if not float(self.h) > 0.0:
            raise ValidationError("bandwidth h must be > 0")
        return super()._jet(X)

    def _coefficients(self):
        return float(self.h), 0.0

    def to_json(self):
        return {"map": self.name, "h": float(self.h)}


class ErfMap(_Map):
    name = "erf"
    stateful = False

    def _jet(self, X):
        d1 = 2.0 / np.sqrt(np.pi) * np.exp(-X * X)
        return erf(X), d1, -2.0 * X * d1


class ErfInvMap(_Map):
    """erfinv after clamping to (-1 + 1e-9, 1 - 1e-9); flat outside."""

    name = "erf-inv"
    stateful = False

    def _jet(self, X):
        inside = np.abs(X) < ERFINV_CLAMP
        S = erfinv(np.clip(X, -ERFINV_CLAMP, ERFINV_CLAMP))
        d1 = np.sqrt(np.pi) / 2.0 * np.exp(S * S)
        d2 = 2.0 * S * d1 * d1
        return S, np.where(inside, d1, 0.0), np.where(inside, d2, 0.0)


MAPS = {cls.name: cls for cls in (
    StdDevMap, ErfMap, ErfInvMap, MeanDistanceMap, MinDistanceMap, UnitCubeMap, BandwidthMap)}

DEFAULT_CHAIN = ("unit-cube", "erf-inv", "mean-distance")


def make_map(spec):
    """Build a map from a name, a ``{"map": name, ...}`` dict or a map instance."""
    if isinstance(spec, _Map):
        return spec
    if isinstance(spec, dict):
        spec = dict(spec)
        name = spec.pop("map", None) or spec.pop("name", None)
        kwargs = spec
    else:
        name, kwargs = str(spec), {}
        if ":" in name:
            name, h = name.split(":", 1)
            kwargs = {"h": float(h)}
    key = name.strip().lower().replace("_", "-")
    if key not in MAPS:
        raise ValidationError(f"unknown map '{name}'; available: {', '.join(sorted(MAPS))}")
    try:
        return MAPS[key](**kwargs)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for map '{key}': {exc}") from None


class MapChain(TransformerMixin, BaseEstimator):
    """Ordered composition of maps, applied left to right.

    Parameters
    ----------
    maps : sequence of str, dict or map instances
        The chain. Each map is fitted on the output of the previous one.

    Examples
    --------
    >>> import numpy as np
    >>> chain = MapChain(["std-dev"]).fit(np.array([[0.0], [2.0]]))
    >>> chain.transform(np.array([[3.0]]))
    array([[3.]])
    """

    def __init__(self, maps=DEFAULT_CHAIN):
        self.maps = maps

    def fit(self, X, y=None):
        X = check_points(X)
        self.maps_ = []
        current = X
        for spec in self.maps:
            m = clone(make_map(spec))
            m.fit(current)
            current = m.transform(current)
            self.maps_.append(m)
        self.n_features_in_ = X.shape[1]
        return self

    def jet(self, X):
        require_fitted(self, "map chain")
        X = check_points(X)
        if X.shape[1] != self.n_features_in_:
            raise ValidationError(
                f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        S = X
        d1 = np.ones_like(X)
        d2 = np.zeros_like(X)
        for m in self.maps_:
            S, g1, g2 = m.jet(S)
            # (g o f)'' = g''(f) f'^2 + g'(f) f''
            d2 = g2 * d1 * d1 + g1 * d2
            d1 = g1 * d1
        return S, d1, d2

    def transform(self, X):
        require_fitted(self, "map chain")
        X = check_points(X)
        if X.shape[1] != self.n_features_in_:
            raise ValidationError(
                f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        S = X
        for m in self.maps_:
            S = m.transform(S)
        return S

    def to_json(self):
        return [make_map(m).to_json() for m in self.maps]
