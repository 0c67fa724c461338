"""Base kernel functions and their analytic derivatives.

Every base works on broadcastable arrays ``u`` and ``v`` whose last axis is
the feature axis, so the same code path serves Gram matrices
(``u[:, None, :]``, ``v[None, :, :]``) and diagonals (``u``, ``u``).
Derivatives are taken with respect to the first argument.
"""

import numpy as np

from ..exceptions import UnsupportedKernelError, ValidationError

_THETA_TERMS = np.arange(-10, 11, dtype=float)


def _prod_except(g):
    """Product over the last axis leaving out each entry in turn."""
    ones = np.ones_like(g[..., :1])
    pre = np.cumprod(np.concatenate([ones, g[..., :-1]], axis=-1), axis=-1)
    suf = np.cumprod(np.concatenate([ones, g[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
    return pre * suf


def _sinc_jet(r):
    """sinc(r) = sin(pi r)/(pi r) with first and second derivatives."""
    s = np.sinc(r)
    small = np.abs(r) < 1e-3
    safe = np.where(small, 1.0, r)
    pi2, pi4, pi6 = np.pi ** 2, np.pi ** 4, np.pi ** 6
    series1 = -pi2 * r / 3.0 + pi4 * r ** 3 / 30.0 - pi6 * r ** 5 / 840.0
    series2 = -pi2 / 3.0 + pi4 * r ** 2 / 10.0 - pi6 * r ** 4 / 168.0
    d1 = np.where(small, series1, (np.cos(np.pi * safe) - s) / safe)
    d2 = np.where(small, series2, -pi2 * s - 2.0 * d1 / safe)
    return s, d1, d2


class BaseKernel:
    """Abstract base kernel.

    Subclasses implement ``value`` and, when differentiable, ``grad`` and
    ``hess`` with respect to the first argument.
    """

    name = None
    param_names = ()
    defaults = ()
    differentiable = True
    positive_definite = False
    nonnegative = False

    def __init__(self, params=()):
        params = tuple(float(p) for p in params)
        if len(params) > len(self.param_names):
            raise ValidationError(
                f"kernel '{self.name}' takes at most {len(self.param_names)} parameters, "
                f"got {len(params)}")
        self.params = params + tuple(self.defaults[len(params):])
        self._check_params()

    def _check_params(self):
        pass

    def value(self, u, v):
        raise NotImplementedError

    def grad(self, u, v):
        raise UnsupportedKernelError(f"kernel '{self.name}' has no gradient")

    def hess(self, u, v):
        raise UnsupportedKernelError(f"kernel '{self.name}' has no Hessian")


class _Tensorial(BaseKernel):
    """k(u, v) = prod_d g(u_d - v_d)."""

    def _jet(self, r):
        raise NotImplementedError

    def value(self, u, v):
        g0, _, _ = self._jet(u - v)
        return np.prod(g0, axis=-1)

    def grad(self, u, v):
        g0, g1, _ = self._jet(u - v)
        return g1 * _prod_except(g0)

    def hess(self, u, v):
        g0, g1, g2 = self._jet(u - v)
        D = g0.shape[-1]
        out = np.empty(g0.shape + (D,))
        for d in range(D):
            h = g0.copy()
            h[..., d] = 1.0
            q = _prod_except(h)
            out[..., d, :] = g1[..., d, None] * g1 * q
            out[..., d, d] = g2[..., d] * q[..., d]
        return out


class Gaussian(BaseKernel):
    name = "gaussian"
    positive_definite = True
    nonnegative = True

    def value(self, u, v):
        r = u - v
        return np.exp(-np.sum(r * r, axis=-1))

    def grad(self, u, v):
        r = u - v
        k = np.exp(-np.sum(r * r, axis=-1))
        return -2.0 * r * k[..., None]

    def hess(self, u, v):
        r = u - v
        k = np.exp(-np.sum(r * r, axis=-1))
        eye = np.eye(r.shape[-1])
        return (4.0 * r[..., :, None] * r[..., None, :] - 2.0 * eye) * k[..., None, None]


class Matern(_Tensorial):
    """exp(-|u - v|_1), a product of one-dimensional Laplace kernels."""

    name = "matern"
    positive_definite = True
    nonnegative = True

    def _jet(self, r):
        e = np.exp(-np.abs(r))
        return e, -np.sign(r) * e, e


class MaternTensorial(BaseKernel):
    """exp(-prod_d |u_d - v_d|)."""

    name = "matern-tensorial"
    nonnegative = True

    def value(self, u, v):
        return np.exp(-np.prod(np.abs(u - v), axis=-1))

    def grad(self, u, v):
        a = np.abs(u - v)
        k = np.exp(-np.prod(a, axis=-1))
        return -np.sign(u - v) * _prod_except(a) * k[..., None]

    def hess(self, u, v):
        r = u - v
        a = np.abs(r)
        s = np.sign(r)
        k = np.exp(-np.prod(a, axis=-1))
        p1 = s * _prod_except(a)
        D = r.shape[-1]
        out = p1[..., :, None] * p1[..., None, :] * k[..., None, None]
        for d in range(D):
            h = a.copy()
            h[..., d] = 1.0
            q = _prod_except(h)
            cross = s[..., d, None] * s * q
            cross[..., d] = 0.0
            out[..., d, :] -= cross * k[..., None]
        return out


class MaternPeriodic(_Tensorial):
    name = "matern-periodic"
    nonnegative = True

    def _jet(self, r):
        a = np.abs(r)
        c = 1.0 + np.e
        e1, e2 = np.exp(a), np.exp(1.0 - a)
        return (e1 + e2) / c, np.sign(r) * (e1 - e2) / c, (e1 + e2) / c


class Multiquadric(BaseKernel):
    name = "multiquadric"
    param_names = ("c",)
    defaults = (1.0,)

    def _check_params(self):
        if not self.params[0] > 0:
            raise ValidationError("multiquadric parameter c must be > 0")

    def value(self, u, v):
        c = self.params[0]
        r = u - v
        return np.sqrt(1.0 + np.sum(r * r, axis=-1) / c ** 2)

    def grad(self, u, v):
        c = self.params[0]
        r = u - v
        k = np.sqrt(1.0 + np.sum(r * r, axis=-1) / c ** 2)
        return r / (c ** 2 * k[..., None])

    def hess(self, u, v):
        c = self.params[0]
        r = u - v
        k = np.sqrt(1.0 + np.sum(r * r, axis=-1) / c ** 2)[..., None, None]
        eye = np.eye(r.shape[-1])
        return eye / (c ** 2 * k) - r[..., :, None] * r[..., None, :] / (c ** 4 * k ** 3)


class MultiquadricTensorial(_Tensorial):
    name = "multiquadric-tensorial"
    param_names = ("c",)
    defaults = (1.0,)
    nonnegative = True

    def _check_params(self):
        if not self.params[0] > 0:
            raise ValidationError("multiquadric parameter c must be > 0")

    def _jet(self, r):
        c2 = self.params[0] ** 2
        g = np.sqrt(1.0 + r * r / c2)
        return g, r / (c2 * g), 1.0 / (c2 * g) - r * r / (c2 ** 2 * g ** 3)


class Sinc(_Tensorial):
    name = "sinc"
    positive_definite = True

    def _jet(self, r):
        return _sinc_jet(r)


class SincSquare(_Tensorial):
    name = "sinc-square"
    positive_definite = True
    nonnegative = True

    def _jet(self, r):
        s, d1, d2 = _sinc_jet(r)
        return s * s, 2.0 * s * d1, 2.0 * (d1 * d1 + s * d2)


class ReLU(_Tensorial):
    """prod_d max(1 - |u_d - v_d|, 0); left derivative at the kinks."""

    name = "relu"
    positive_definite = True
    nonnegative = True

    def _jet(self, r):
        g = np.maximum(1.0 - np.abs(r), 0.0)
        left = np.where((r > -1.0) & (r <= 0.0), 1.0, np.where((r > 0.0) & (r <= 1.0), -1.0, 0.0))
        return g, left, np.zeros_like(r)


class Truncated(BaseKernel):
    """max(1 - |u - v|, 0) with the Euclidean norm."""

    name = "truncated"
    nonnegative = True

    def value(self, u, v):
        r = u - v
        return np.maximum(1.0 - np.sqrt(np.sum(r * r, axis=-1)), 0.0)

    def grad(self, u, v):
        r = u - v
        n = np.sqrt(np.sum(r * r, axis=-1))[..., None]
        inside = (n > 0.0) & (n <= 1.0)
        g = np.where(inside, -r / np.where(n > 0.0, n, 1.0), 0.0)
        # left derivative at the apex: moving u_d down lowers |r| from zero
        return np.where(n == 0.0, 1.0, g)

    def hess(self, u, v):
        r = u - v
        n = np.sqrt(np.sum(r * r, axis=-1))[..., None, None]
        inside = (n > 0.0) & (n <= 1.0)
        safe = np.where(n > 0.0, n, 1.0)
        eye = np.eye(r.shape[-1])
        h = -(eye / safe - r[..., :, None] * r[..., None, :] / safe ** 3)
        return np.where(inside, h, 0.0)


class DotProduct(BaseKernel):
    name = "dot-product"

    def value(self, u, v):
        return np.sum(u * v, axis=-1)

    def grad(self, u, v):
        return np.broadcast_to(v, np.broadcast_shapes(u.shape, v.shape)).copy()

    def hess(self, u, v):
        shape = np.broadcast_shapes(u.shape, v.shape)
        return np.zeros(shape + (shape[-1],))


class Polynomial(BaseKernel):
    """(1 + <u, v>/D)^p."""

    name = "polynomial"
    param_names = ("p",)
    defaults = (2.0,)

    def _check_params(self):
        p = self.params[0]
        if p < 1 or p != int(p):
            raise ValidationError("polynomial degree p must be an integer >= 1")

    def value(self, u, v):
        D = u.shape[-1]
        return (1.0 + np.sum(u * v, axis=-1) / D) ** self.params[0]

    def grad(self, u, v):
        D = u.shape[-1]
        p = self.params[0]
        base = 1.0 + np.sum(u * v, axis=-1) / D
        return (p * base ** (p - 1) / D)[..., None] * v

    def hess(self, u, v):
        D = u.shape[-1]
        p = self.params[0]
        base = 1.0 + np.sum(u * v, axis=-1) / D
        vb = np.broadcast_to(v, np.broadcast_shapes(u.shape, v.shape))
        coef = (p * (p - 1) * base ** (p - 2) / D ** 2) if p >= 2 else np.zeros_like(base)
        return coef[..., None, None] * vb[..., :, None] * vb[..., None, :]


def _circular_shift_stack(v):
    """Stack T with T[..., m, d] = v[..., (m + d) % D]."""
    D = v.shape[-1]
    idx = (np.arange(D)[:, None] + np.arange(D)[None, :]) % D
    return v[..., idx]


class PolynomialConvolutional(BaseKernel):
    """sum_m |1 + (u * v)_m / D|^p with (u * v)_m = sum_d u_d v_{(m+d) % D}."""

    name = "polynomial-convolutional"
    param_names = ("p",)
    defaults = (2.0,)

    def _check_params(self):
        p = self.params[0]
        if p < 1 or p != int(p):
            raise ValidationError("polynomial degree p must be an integer >= 1")

    def _conv(self, u, v):
        D = u.shape[-1]
        T = _circular_shift_stack(v)
        a = 1.0 + np.sum(u[..., None, :] * T, axis=-1) / D
        return a, T, D

    def value(self, u, v):
        a, _, _ = self._conv(u, v)
        return np.sum(np.abs(a) ** self.params[0], axis=-1)

    def grad(self, u, v):
        p = self.params[0]
        a, T, D = self._conv(u, v)
        w = p * np.abs(a) ** (p - 1) * np.sign(a) / D
        return np.sum(w[..., :, None] * T, axis=-2)

    def hess(self, u, v):
        p = self.params[0]
        a, T, D = self._conv(u, v)
        w = p * (p - 1) * np.abs(a) ** (p - 2) / D ** 2 if p >= 2 else np.zeros_like(a)
        return np.einsum("...m,...md,...me->...de", w, T, T)


class PeriodicGaussian(_Tensorial):
    """prod_d sum_{n=-10}^{10} exp(-(r_d - n)^2), a 21-term theta sum."""

    name = "periodic-gaussian"
    positive_definite = True
    nonnegative = True

    def _jet(self, r):
        s = r[..., None] - _THETA_TERMS
        e = np.exp(-s * s)
        return (np.sum(e, axis=-1), np.sum(-2.0 * s * e, axis=-1),
                np.sum((4.0 * s * s - 2.0) * e, axis=-1))


BASES = {cls.name: cls for cls in (
    Gaussian, Matern, MaternTensorial, MaternPeriodic, Multiquadric,
    MultiquadricTensorial, Sinc, SincSquare, ReLU, Truncated, DotProduct,
    Polynomial, PolynomialConvolutional, PeriodicGaussian)}

ALIASES = {
    "tensor-product": "relu",
    "matern-l1": "matern",
    "dot": "dot-product",
    "linear": "dot-product",
    "sinc-tensorial": "sinc",
    "sinc-square-tensorial": "sinc-square",
}


def make_base(name, params=()):
    key = str(name).strip().lower().replace("_", "-").replace(" ", "-").replace("é", "e")
    key = ALIASES.get(key, key)
    if key not in BASES:
        raise ValidationError(
            f"unknown kernel '{name}'; available: {', '.join(sorted(BASES))}")
    return BASES[key](params)
