"""Gromov-Monge matching of two distance matrices by swap descent."""

import numpy as np

from ..clustering.swap import SwapGain, swap_descent
from ..exceptions import ValidationError


def _check_distances(D, name):
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {D.shape}")
    if not np.all(np.isfinite(D)):
        raise ValidationError(f"{name} has non-finite entries")
    scale = 1.0 + float(np.max(np.abs(D))) if D.size else 1.0
    if np.max(np.abs(D - D.T), initial=0.0) > 1e-10 * scale:
        raise ValidationError(f"{name} must be symmetric")
    if np.max(np.abs(np.diag(D)), initial=0.0) > 1e-10 * scale:
        raise ValidationError(f"{name} must have a zero diagonal")
    return D


def gromov_objective(DX, DY, sigma):
    """sum_ij |DX[i, j] - DY[sigma[i], sigma[j]]|^2."""
    DX = np.asarray(DX, dtype=float)
    DY = np.asarray(DY, dtype=float)
    sigma = np.asarray(sigma)
    return float(np.sum((DX - DY[np.ix_(sigma, sigma)]) ** 2))


def principal_coordinate(D):
    """First classical-scaling coordinate of a distance matrix.

    The sign is fixed so that the first entry with the largest magnitude
    is positive.
    """
    n = D.shape[0]
    J = np.eye(n) - 1.0 / n
    B = -0.5 * J @ (D ** 2) @ J
    w, V = np.linalg.eigh(0.5 * (B + B.T))
    v = V[:, -1]
    pivot = int(np.argmax(np.abs(v)))
    return v if v[pivot] >= 0 else -v


class GromovGain(SwapGain):
    """Gain of exchanging the partners of positions i and j."""

    def __init__(self, DX, DY, sigma):
        self.DX = DX
        self.DY = DY
        self.P = DY[np.ix_(sigma, sigma)]

    def row(self, i, js, sigma):
        # only rows/columns i and j change; per column m the change is
        # 2 (DX_im - DX_jm)(P_jm - P_im), with m in {i, j} corrected
        DX, P = self.DX, self.P
        js = np.asarray(js)
        S = np.sum((DX[i] - DX[js]) * (P[js] - P[i]), axis=1)
        return 4.0 * (S + 2.0 * DX[i, js] * P[i, js])

    def __call__(self, i, j, sigma):
        return float(self.row(i, [j], sigma)[0])

    def swapped(self, i, j, sigma):
        P = self.P
        P[[i, j], :] = P[[j, i], :]
        P[:, [i, j]] = P[:, [j, i]]


def gromov_monge(DX, DY, init="principal", tol=None, return_objective=False):
    """Permutation matching two point clouds through their distance matrices.

    Minimizes ``sum_ij |DX[i, j] - DY[sigma[i], sigma[j]]|^2`` by swap
    descent, so the result is a local optimum for pairwise exchanges.

    Parameters
    ----------
    DX, DY : array-like of shape (N, N)
        Symmetric distance matrices with zero diagonal.
    init : {"principal", "identity"} or array-like, default="principal"
        ``"principal"`` sorts both clouds along their first classical
        scaling coordinate and matches ranks.
    tol : float, default=None
        Minimal accepted gain; defaults to ``1e-12`` times the initial
        objective (plus one).
    return_objective : bool, default=False

    Returns
    -------
    sigma : ndarray of shape (N,)
        Row i of X is matched with row ``sigma[i]`` of Y.
    objective : float
        Only with ``return_objective``.
    """
    DX = _check_distances(DX, "DX")
    DY = _check_distances(DY, "DY")
    if DX.shape != DY.shape:
        raise ValidationError(f"DX and DY shapes differ: {DX.shape} vs {DY.shape}")
    n = DX.shape[0]
    if isinstance(init, str):
        if init == "identity":
            sigma0 = np.arange(n)
        elif init == "principal":
            sigma0 = np.empty(n, dtype=np.int64)
            sigma0[np.argsort(principal_coordinate(DX), kind="stable")] = np.argsort(
                principal_coordinate(DY), kind="stable")
        else:
            raise ValidationError(f"unknown init '{init}'")
    else:
        sigma0 = np.asarray(init, dtype=np.int64)
        if sigma0.shape != (n,) or not np.array_equal(np.sort(sigma0), np.arange(n)):
            raise ValidationError("init must be a permutation of range(N)")
    if tol is None:
        tol = 1e-12 * (1.0 + gromov_objective(DX, DY, sigma0))
    gain = GromovGain(DX, DY, sigma0)
    sigma = swap_descent(gain, sigma0, tol=tol, upper=True)
    if return_objective:
        return sigma, gromov_objective(DX, DY, sigma)
    return sigma
