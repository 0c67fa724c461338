"""Discrete descent over permutations by elementary two-element swaps."""

import numpy as np

from ..exceptions import ValidationError


class SwapGain:
    """Permutation gain ``s(i, j, sigma) = C(sigma) - C(sigma_ij)``.

    Subclasses implement :meth:`__call__`. :meth:`row` may be overridden
    with a vectorized version and :meth:`swapped` with a cache update; the
    descent calls it after every accepted swap.
    """

    def __call__(self, i, j, sigma):
        raise NotImplementedError

    def row(self, i, js, sigma):
        return np.array([self(i, j, sigma) for j in js], dtype=float)

    def swapped(self, i, j, sigma):
        pass


class FunctionGain(SwapGain):
    """Wrap a plain callable ``s(i, j, sigma)``."""

    def __init__(self, func):
        self.func = func

    def __call__(self, i, j, sigma):
        return float(self.func(i, j, sigma))


class LinearAssignmentGain(SwapGain):
    """Gain of the linear cost ``sum_i C[i, sigma[i]]``."""

    def __init__(self, C):
        self.C = np.asarray(C, dtype=float)

    def __call__(self, i, j, sigma):
        C = self.C
        return C[i, sigma[i]] + C[j, sigma[j]] - C[i, sigma[j]] - C[j, sigma[i]]

    def row(self, i, js, sigma):
        C = self.C
        sj = sigma[js]
        return C[i, sigma[i]] + C[js, sj] - C[i, sj] - C[js, sigma[i]]


def swap_descent(gain, sigma0, rows=None, cols=None, tol=1e-12, upper=False,
                 max_passes=None, return_n_swaps=False):
    """Apply improving swaps until no swap in the loop ranges has gain > tol.

    Parameters
    ----------
    gain : SwapGain or callable
        ``gain(i, j, sigma)``: decrease of the objective when the entries
        ``sigma[i]`` and ``sigma[j]`` are exchanged.
    sigma0 : array-like of int
        Initial injective mapping; it is not modified.
    rows, cols : array-like of int, default=None
        Positions scanned by the outer and inner loops (all positions when
        None).
    tol : float, default=1e-12
        A swap is accepted only when its gain exceeds ``tol``, so every
        accepted swap strictly decreases the objective and the loop ends.
    upper : bool, default=False
        Only visit ``j > i``; enough for symmetric gains.
    max_passes : int, default=None
        Optional cap on full sweeps.

    Returns
    -------
    sigma : ndarray of int
    n_swaps : int
        Only with ``return_n_swaps``.

    Examples
    --------
    >>> C = [[0.0, 1.0], [1.0, 0.0]]
    >>> swap_descent(LinearAssignmentGain(C), [1, 0]).tolist()
    [0, 1]
    """
    if not isinstance(gain, SwapGain):
        gain = FunctionGain(gain)
    sigma = np.array(sigma0, dtype=np.int64).ravel()
    if np.unique(sigma).size != sigma.size:
        raise ValidationError("sigma0 must be injective")
    n = sigma.size
    rows = np.arange(n) if rows is None else np.asarray(rows, dtype=np.int64)
    cols = np.arange(n) if cols is None else np.asarray(cols, dtype=np.int64)
    n_swaps = 0
    passes = 0
    changed = True
    while changed and (max_passes is None or passes < max_passes):
        changed = False
        passes += 1
        for i in rows:
            js = cols[cols > i] if upper else cols[cols != i]
            start = 0
            while start < js.size:
                tail = js[start:]
                hits = np.flatnonzero(gain.row(i, tail, sigma) > tol)
                if hits.size == 0:
                    break
                j = tail[hits[0]]
                sigma[i], sigma[j] = sigma[j], sigma[i]
                gain.swapped(i, j, sigma)
                n_swaps += 1
                changed = True
                start += hits[0] + 1
    return (sigma, n_swaps) if return_n_swaps else sigma
