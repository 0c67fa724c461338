"""Kernel ridge regression with exact interpolation as the epsilon -> 0 limit."""

import json

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, clone

from .._validation import check_points, check_values
from ..exceptions import ValidationError
from ..kernels.kernel import Kernel, default_kernel
from ..kernels.maps import require_fitted
from ._core import DEFAULT_EPSILON, fit_matrix, resolve_basis, solve_coefficients

FORMAT = "rkhs-kit-regressor"
VERSION = 1


class IdentityResidual:
    """Residual base g(x) = x with gradient the identity matrix."""

    name = "identity"

    def __call__(self, X):
        return np.asarray(X, dtype=float)

    def gradient(self, X):
        X = np.asarray(X, dtype=float)
        return np.broadcast_to(np.eye(X.shape[1]), (X.shape[0],) + (X.shape[1],) * 2).copy()

    def __eq__(self, other):
        return isinstance(other, IdentityResidual)

    def __hash__(self):
        return hash(self.name)


class KernelRegressor(RegressorMixin, BaseEstimator):
    """Kernel regression f(z) = K(z, Y) theta (+ g(z)).

    With basis sites ``Y`` equal to the training set ``X``,
    ``theta = (K(X, X) + epsilon R)^{-1} f(X)``. With a separate basis the
    least-squares form ``(K(Y, X) K(X, Y) + epsilon R)^{-1} K(Y, X) f(X)`` is
    used. ``epsilon = 0`` with ``Y = X`` interpolates the labels.

    Parameters
    ----------
    kernel : Kernel, default=None
        Kernel specification; ``None`` uses the Matérn kernel with the
        standard map chain. Its maps are (re)fitted on the training set.
    epsilon : float, default=1e-8
        Ridge regularization.
    regularizer : {"identity", "laplacian"} or ndarray, default="identity"
        The matrix R. ``"laplacian"`` uses the kernel Laplace-Beltrami matrix
        on the basis sites, which gives the denoising fit.
    basis : array-like of shape (N_y, D), default=None
        Projection sites ``Y``. ``None`` uses the training set.
    residual_base : callable, default=None
        Optional g with ``g(X) -> (N, D_f)``; the fit corrects ``f - g`` and
        predictions add ``g`` back. A ``gradient`` method, when present, is
        added to :meth:`gradient`. Use :class:`IdentityResidual` for g(x)=x.

    Attributes
    ----------
    kernel_ : Kernel
        Fitted kernel.
    X_fit_ : ndarray of shape (N_x, D)
    basis_ : ndarray of shape (N_y, D)
    dual_coef_ : ndarray of shape (N_y, D_f)
        The coefficients theta.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.linspace(-1, 1, 9)[:, None]
    >>> reg = KernelRegressor(epsilon=0.0).fit(X, np.cos(3 * X[:, 0]))
    >>> bool(np.allclose(reg.predict(X), np.cos(3 * X[:, 0])))
    True
    """

    def __init__(self, kernel=None, epsilon=DEFAULT_EPSILON, regularizer="identity",
                 basis=None, residual_base=None):
        self.kernel = kernel
        self.epsilon = epsilon
        self.regularizer = regularizer
        self.basis = basis
        self.residual_base = residual_base

    def fit(self, X, y):
        X = check_points(X)
        F, self._y_1d = check_values(y, X.shape[0])
        kernel = self.kernel if self.kernel is not None else default_kernel()
        if not isinstance(kernel, Kernel):
            raise ValidationError("kernel must be a Kernel instance")
        self.kernel_ = clone(kernel).fit(X)
        Y, same = resolve_basis(X, self.basis)
        if self.residual_base is not None:
            F = F - self._residual(X, F.shape[1])
        eps = float(self.epsilon)
        self.dual_coef_ = solve_coefficients(self.kernel_, X, Y, same, F, eps, self.regularizer)
        self.X_fit_ = X
        self.basis_ = Y
        self.n_features_in_ = X.shape[1]
        self.n_outputs_ = F.shape[1]
        return self

    def _residual(self, X, n_out=None):
        g = np.asarray(self.residual_base(X), dtype=float)
        if g.ndim == 1:
            g = g[:, None]
        if n_out is not None and g.shape != (X.shape[0], n_out):
            raise ValidationError(f"residual base returned shape {g.shape}, expected "
                                  f"{(X.shape[0], n_out)}")
        return g

    def _check_Z(self, Z):
        require_fitted(self, "regressor")
        Z = check_points(Z, "Z")
        if Z.shape[1] != self.n_features_in_:
            raise ValidationError(f"Z has {Z.shape[1]} columns, expected {self.n_features_in_}")
        return Z

    def _shape_out(self, values):
        return values[..., 0] if self._y_1d else values

    def predict(self, Z):
        """K(Z, Y) theta, plus g(Z) when a residual base is set."""
        Z = self._check_Z(Z)
        out = self.kernel_.gram(Z, self.basis_) @ self.dual_coef_
        if self.residual_base is not None:
            out = out + self._residual(Z, out.shape[1])
        return self._shape_out(out)

    def predict_raw(self, Z):
        Z = self._check_Z(Z)
        out = self.kernel_.gram(Z, self.basis_) @ self.dual_coef_
        if self.residual_base is not None:
            out = out + self._residual(Z, out.shape[1])
        return out

    def gradient(self, Z):
        """Gradient of the prediction, shape (N_z, D, D_f)."""
        Z = self._check_Z(Z)
        self.kernel_.require_differentiable()
        G = np.einsum("zyd,yf->zdf", self.kernel_.gradient(Z, self.basis_), self.dual_coef_)
        if self.residual_base is not None and hasattr(self.residual_base, "gradient"):
            g = np.asarray(self.residual_base.gradient(Z), dtype=float)
            G = G + g.reshape(G.shape)
        return G

    def hessian(self, Z):
        """Hessian of the prediction, shape (N_z, D, D, D_f)."""
        Z = self._check_Z(Z)
        self.kernel_.require_differentiable()
        return np.einsum("zyde,yf->zdef", self.kernel_.hessian(Z, self.basis_), self.dual_coef_)

    def taylor2(self, x0, Z):
        """Second-order expansion of the fitted function around ``x0``.

        f(x0) + grad f(x0)^T h + 1/2 h^T H(x0) h with h = z - x0, using the
        analytic kernel gradient and Hessian. Returns shape (N_z, D_f), or
        (N_z,) for 1-D labels.
        """
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))[None, :]
        Z = self._check_Z(Z)
        x0 = self._check_Z(x0)
        f0 = self.predict_raw(x0)[0]
        g0 = self.gradient(x0)[0]
        H0 = self.hessian(x0)[0]
        h = Z - x0
        out = f0[None, :] + h @ g0 + 0.5 * np.einsum("zd,def,ze->zf", h, H0, h)
        return self._shape_out(out)

    # serialization -------------------------------------------------------

    def to_dict(self):
        require_fitted(self, "regressor")
        if self.residual_base is not None and not isinstance(self.residual_base, IdentityResidual):
            raise ValidationError("only the identity residual base can be serialized")
        reg = self.regularizer
        if not isinstance(reg, str):
            reg = np.asarray(reg, dtype=float).tolist()
        kernel = self.kernel if self.kernel is not None else default_kernel()
        return {
            "format": FORMAT,
            "version": VERSION,
            "kernel": kernel.to_dict(),
            "epsilon": float(self.epsilon),
            "regularizer": reg,
            "residual_base": None if self.residual_base is None else "identity",
            "labels_1d": bool(self._y_1d),
            "X": self.X_fit_.tolist(),
            "basis": self.basis_.tolist(),
            "theta": self.dual_coef_.tolist(),
        }

    def to_json(self):
        """JSON text; floats use the shortest repr that round-trips exactly."""
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        if data.get("format") != FORMAT:
            raise ValidationError("not a serialized regressor")
        if data.get("version") != VERSION:
            raise ValidationError(f"unsupported regressor version {data.get('version')}")
        X = np.asarray(data["X"], dtype=float)
        basis = np.asarray(data["basis"], dtype=float)
        reg = data["regularizer"]
        reg = reg if isinstance(reg, str) else np.asarray(reg, dtype=float)
        same = basis.shape == X.shape and np.array_equal(basis, X)
        obj = cls(kernel=Kernel.from_dict(data["kernel"]), epsilon=data["epsilon"],
                  regularizer=reg, basis=None if same else basis,
                  residual_base=IdentityResidual() if data.get("residual_base") else None)
        obj.kernel_ = clone(obj.kernel).fit(X)
        obj.X_fit_ = X
        obj.basis_ = basis
        obj.dual_coef_ = np.asarray(data["theta"], dtype=float).reshape(basis.shape[0], -1)
        obj._y_1d = bool(data["labels_1d"])
        obj.n_features_in_ = X.shape[1]
        obj.n_outputs_ = obj.dual_coef_.shape[1]
        return obj

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid regressor JSON: {exc}") from None
        return cls.from_dict(data)


def fit_regressor(kernel, X, fX, Y=None, epsilon=DEFAULT_EPSILON, regularizer="identity",
                  residual_base=None):
    """Functional form of :class:`KernelRegressor`."""
    return KernelRegressor(kernel=kernel, epsilon=epsilon, regularizer=regularizer,
                           basis=Y, residual_base=residual_base).fit(X, fX)


def projection_matrix(kernel, X, Z, Y=None, epsilon=0.0, regularizer="identity"):
    """Projection operator P with P f(X) = f_k(Z), shape (N_z, N_x)."""
    X = check_points(X)
    Z = check_points(Z, "Z")
    k = clone(kernel if kernel is not None else default_kernel()).fit(X)
    Y, same = resolve_basis(X, Y)
    A = fit_matrix(k, X, Y, same, epsilon, regularizer)
    return k.gram(Z, Y) @ A


def partition_of_unity(kernel, X, Z=None, Y=None, epsilon=0.0):
    """Basis functions psi^n evaluated on Z; column n responds to label e_n.

    With Z = Y = X and epsilon = 0 this is the identity matrix.
    """
    X = check_points(X)
    return projection_matrix(kernel, X, X if Z is None else Z, Y=Y, epsilon=epsilon)
