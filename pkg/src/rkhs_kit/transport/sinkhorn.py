"""Entropic transport by iterative proportional fitting of the Gibbs kernel."""

import numpy as np
from scipy.special import logsumexp

from ..exceptions import ConvergenceError, ValidationError

LOG_DOMAIN_RATIO = 0.05


def _marginal_error(P):
    return max(float(np.max(np.abs(P.sum(axis=1) - 1.0))),
               float(np.max(np.abs(P.sum(axis=0) - 1.0))))


def sinkhorn(C, epsilon, tol=1e-9, max_iter=10_000, log_domain=None, return_n_iter=False):
    """Doubly stochastic plan ``diag(a) exp(-C / epsilon) diag(b)``.

    Rows and columns are rescaled alternately until both marginals are
    within ``tol`` of one.

    Parameters
    ----------
    C : array-like of shape (N, N)
    epsilon : float
        Entropic temperature, must be positive.
    tol : float, default=1e-9
        Maximal absolute deviation of any row or column sum from 1.
    max_iter : int, default=10000
    log_domain : bool, default=None
        Iterate on log-potentials with log-sum-exp. ``None`` switches it on
        when ``epsilon < 0.05 * median(C)``, where the Gibbs kernel would
        underflow.
    return_n_iter : bool, default=False

    Returns
    -------
    plan : ndarray of shape (N, N)
        Entrywise positive, row and column sums equal to 1.
    n_iter : int
        Only with ``return_n_iter``.

    Raises
    ------
    ConvergenceError
        When ``max_iter`` is reached; the report holds the final deviation.

    Examples
    --------
    >>> P = sinkhorn([[0.0, 1.0], [1.0, 0.0]], epsilon=1.0)
    >>> P.sum(axis=0).round(9).tolist()
    [1.0, 1.0]
    """
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValidationError(f"cost matrix must be square, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise ValidationError("cost matrix has non-finite entries")
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive")
    if log_domain is None:
        log_domain = epsilon < LOG_DOMAIN_RATIO * float(np.median(C))
    n = C.shape[0]
    if log_domain:
        # potentials f, g with plan exp((f_i + g_j - C_ij) / eps)
        S = -C / epsilon
        f = np.zeros(n)
        g = np.zeros(n)
        for it in range(1, max_iter + 1):
            f = -logsumexp(S + g[None, :], axis=1)
            g = -logsumexp(S + f[:, None], axis=0)
            P = np.exp(S + f[:, None] + g[None, :])
            err = _marginal_error(P)
            if err <= tol:
                break
    else:
        K = np.exp(-C / epsilon)
        b = np.ones(n)
        for it in range(1, max_iter + 1):
            a = 1.0 / (K @ b)
            b = 1.0 / (K.T @ a)
            P = a[:, None] * K * b[None, :]
            err = _marginal_error(P)
            if err <= tol:
                break
    if not err <= tol:
        raise ConvergenceError("Sinkhorn iterations did not reach the marginal tolerance",
                               marginal_error=err, tol=tol, iterations=max_iter,
                               epsilon=epsilon, log_domain=bool(log_domain))
    return (P, it) if return_n_iter else P
