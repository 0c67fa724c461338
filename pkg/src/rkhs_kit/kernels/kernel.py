"""Kernel specification: a base kernel composed with a fitted map chain."""

import json

import numpy as np
from sklearn.base import BaseEstimator, clone

from .._validation import check_points, check_same_dim
from ..exceptions import UnsupportedKernelError, ValidationError
from ._bases import make_base
from .maps import DEFAULT_CHAIN, MapChain, make_map, require_fitted


class Kernel(BaseEstimator):
    """A base kernel evaluated on rescaled inputs, k(S(x), S(y)).

    Parameters
    ----------
    base : str, default="matern"
        Base kernel identifier, for example ``"gaussian"``, ``"matern"``,
        ``"multiquadric"``, ``"polynomial"`` or ``"relu"``.
    params : tuple of float, default=()
        Base kernel parameters (multiquadric ``c``, polynomial degree ``p``).
        Missing entries take the base defaults.
    maps : sequence, default=("unit-cube", "erf-inv", "mean-distance")
        Map chain applied left to right before the base kernel. Entries are
        names, ``{"map": "bandwidth", "h": 2.0}`` dicts or map instances.
        Use ``()`` for the identity chain.

    Attributes
    ----------
    chain_ : MapChain
        The fitted map chain.
    base_ : BaseKernel
        The instantiated base kernel.

    Examples
    --------
    >>> import numpy as np
    >>> k = Kernel("matern", maps=()).fit(np.zeros((1, 1)))
    >>> round(k(np.array([0.0]), np.array([1.0])), 7)
    0.3678794
    """

    def __init__(self, base="matern", params=(), maps=DEFAULT_CHAIN):
        self.base = base
        self.params = params
        self.maps = maps

    def fit(self, X, y=None):
        """Fit the data-dependent maps on ``X``."""
        X = check_points(X)
        self.base_ = make_base(self.base, self.params)
        self.chain_ = MapChain(list(self.maps)).fit(X)
        self.n_features_in_ = X.shape[1]
        return self

    @property
    def is_fitted(self):
        return hasattr(self, "chain_")

    @property
    def differentiable(self):
        return make_base(self.base, self.params).differentiable

    @property
    def positive_definite(self):
        return make_base(self.base, self.params).positive_definite

    def _mapped(self, X, name):
        require_fitted(self, "kernel")
        X = check_points(X, name=name)
        if X.shape[1] != self.n_features_in_:
            raise ValidationError(
                f"{name} has {X.shape[1]} columns, kernel was fitted on {self.n_features_in_}")
        return X

    def transform(self, X):
        """Apply the fitted map chain."""
        X = self._mapped(X, "X")
        return self.chain_.transform(X)

    def __call__(self, x, y):
        """Evaluate k(x, y) for two single points."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise ValidationError(f"points must be vectors of equal length, got {x.shape}, {y.shape}")
        return float(self.gram(x[None, :], y[None, :])[0, 0])

    def gram(self, X, Y=None):
        """Gram matrix K(X, Y) of shape (N_x, N_y)."""
        U = self.transform(X)
        V = U if Y is None else self.transform(Y)
        return self.base_.value(U[:, None, :], V[None, :, :])

    def diag(self, X):
        """k(x^i, x^i) for each row, computed entrywise like ``gram``."""
        U = self.transform(X)
        return self.base_.value(U[:, None, :], U[:, None, :])[:, 0]

    def pairwise(self, X, Y):
        """k(x^i, y^i) for aligned rows."""
        U = self.transform(X)
        V = self.transform(Y)
        if U.shape != V.shape:
            raise ValidationError("pairwise evaluation needs sets of equal shape")
        return self.base_.value(U[:, None, :], V[:, None, :])[:, 0]

    def gradient(self, Z, Y):
        """Derivative of k(z, y) in z, shape (N_z, N_y, D), map Jacobians included."""
        Z = self._mapped(Z, "Z")
        U, d1, _ = self.chain_.jet(Z)
        V = self.transform(Y)
        g = self.base_.grad(U[:, None, :], V[None, :, :])
        return g * d1[:, None, :]

    def hessian(self, Z, Y):
        """Second derivative of k(z, y) in z, shape (N_z, N_y, D, D)."""
        Z = self._mapped(Z, "Z")
        U, d1, d2 = self.chain_.jet(Z)
        V = self.transform(Y)
        Uz, Vy = U[:, None, :], V[None, :, :]
        H = self.base_.hess(Uz, Vy)
        G = self.base_.grad(Uz, Vy)
        out = H * d1[:, None, :, None] * d1[:, None, None, :]
        idx = np.arange(U.shape[1])
        out[..., idx, idx] += G * d2[:, None, :]
        return out

    def require_differentiable(self):
        if not self.differentiable:
            raise UnsupportedKernelError(f"kernel '{self.base}' is not differentiable")

    # serialization -------------------------------------------------------

    def to_dict(self):
        base = make_base(self.base, self.params)
        return {"kernel": base.name, "params": [float(p) for p in self.params],
                "maps": [make_map(m).to_json() for m in self.maps]}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "kernel" not in data:
            raise ValidationError("kernel spec must be an object with a 'kernel' field")
        unknown = set(data) - {"kernel", "params", "maps"}
        if unknown:
            raise ValidationError(f"unknown kernel spec fields: {sorted(unknown)}")
        maps = data.get("maps", list(DEFAULT_CHAIN))
        for m in maps:
            make_map(m)
        params = tuple(float(p) for p in data.get("params", []))
        make_base(data["kernel"], params)
        return cls(base=data["kernel"], params=params, maps=tuple(
            m if isinstance(m, str) else dict(m) for m in maps))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid kernel JSON: {exc}") from None
        return cls.from_dict(data)


def default_kernel():
    """Matérn base with the standard (unit-cube, erf-inv, mean-distance) chain."""
    return Kernel()


def fitted(kernel, *sets):
    """Return ``kernel`` if fitted, else a clone fitted on the stacked sets."""
    if kernel is None:
        kernel = default_kernel()
    if isinstance(kernel, Kernel) and kernel.is_fitted:
        return kernel
    if not isinstance(kernel, Kernel):
        raise ValidationError(f"expected a Kernel, got {type(kernel).__name__}")
    arrays = [check_points(S) for S in sets]
    for a in arrays[1:]:
        check_same_dim(arrays[0], a)
    return clone(kernel).fit(np.vstack(arrays))
