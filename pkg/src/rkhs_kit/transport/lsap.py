"""Exact linear sum assignment by shortest augmenting paths with potentials."""

from collections import deque

import numpy as np

from ..exceptions import ValidationError


def _validate_cost(C):
    C = np.asarray(C, dtype=float)
    if C.ndim != 2:
        raise ValidationError(f"cost matrix must be 2-D, got shape {C.shape}")
    M, N = C.shape
    if M > N:
        raise ValidationError(f"cost matrix needs rows <= columns, got {M}x{N}")
    if not np.all(np.isfinite(C)):
        raise ValidationError("cost matrix has non-finite entries")
    return C


def _column_reduction(C, u, v, p):
    """Warm start for square problems; returns the rows left unmatched.

    v_j is the column minimum and u_i the row minimum of the reduced
    costs, which keeps u_i + v_j <= c_ij. Each row then takes its first
    tight free column.
    """
    v[1:] = C.min(axis=0)
    R = C - v[1:][None, :]
    u[1:] = R.min(axis=1)
    tight = R - u[1:][:, None] <= 0.0
    free_rows = []
    for i in range(C.shape[0]):
        cols = np.flatnonzero(tight[i] & (p[1:] == 0))
        if cols.size:
            p[cols[0] + 1] = i + 1
        else:
            free_rows.append(i + 1)
    return free_rows


def _augmenting_paths(C):
    """Row-by-row Dijkstra on reduced costs (Hungarian method, O(M^2 N)).

    Returns the column of each row and the potentials u (rows), v (columns)
    with u_i + v_j <= c_ij, equality on the assignment, and v_j = 0 on
    columns that were never reached.
    """
    M, N = C.shape
    u = np.zeros(M + 1)
    v = np.zeros(N + 1)
    # column 0 is a virtual source; p[j] is the 1-based row owning column j
    p = np.zeros(N + 1, dtype=np.int64)
    way = np.zeros(N + 1, dtype=np.int64)
    A = np.zeros((M + 1, N + 1))
    A[1:, 1:] = C
    rows = range(1, M + 1)
    if M == N:
        rows = _column_reduction(C, u, v, p)
    for i in rows:
        p[0] = i
        j0 = 0
        minv = np.full(N + 1, np.inf)
        used = np.zeros(N + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used
            free[0] = False
            cur = A[i0] - u[i0] - v
            better = free & (cur < minv)
            minv[better] = cur[better]
            way[better] = j0
            masked = np.where(free, minv, np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    sigma = np.empty(M, dtype=np.int64)
    for j in range(1, N + 1):
        if p[j]:
            sigma[p[j] - 1] = j - 1
    return sigma, u[1:], v[1:]


def _lexicographic_min(C, sigma, u, v):
    """Smallest assignment in lexicographic order among all optimal ones.

    Optimal assignments are perfect matchings of the tight graph
    (zero reduced cost) once dummy rows are added for columns with zero
    potential, which may stay unassigned. Rows are fixed in order, each to
    the smallest column reachable through an alternating cycle.
    """
    M, N = C.shape
    scale = 1.0 + float(np.max(np.abs(C))) if C.size else 1.0
    # rounding in the potentials grows with the number of updates
    tol = 16.0 * N * np.finfo(float).eps * scale
    tight = (C - u[:, None] - v[None, :]) <= tol
    if np.all(tight.sum(axis=1) == 1):
        return sigma
    optional = np.abs(v) <= tol
    adj = [np.flatnonzero(tight[i]) for i in range(M)]
    optional_cols = np.flatnonzero(optional)
    n_rows = N  # real rows then N - M dummy rows
    col_of = np.full(n_rows, -1, dtype=np.int64)
    row_of = np.full(N, -1, dtype=np.int64)
    col_of[:M] = sigma
    row_of[sigma] = np.arange(M)
    dummy = M
    for j in range(N):
        if row_of[j] < 0:
            col_of[dummy] = j
            row_of[j] = dummy
            dummy += 1

    def neighbours(r):
        return adj[r] if r < M else optional_cols

    fixed_cols = np.zeros(N, dtype=bool)
    for i in range(M):
        for j in adj[i]:
            if j >= col_of[i]:
                break
            if fixed_cols[j]:
                continue
            target = col_of[i]
            start = row_of[j]
            came_from = {}
            seen_rows = {start, i}
            queue = deque([start])
            found = False
            while queue and not found:
                r = queue.popleft()
                for c in neighbours(r):
                    if c == j or fixed_cols[c] or c == col_of[r] or c in came_from:
                        continue
                    came_from[c] = r
                    if c == target:
                        found = True
                        break
                    r2 = row_of[c]
                    if r2 not in seen_rows:
                        seen_rows.add(r2)
                        queue.append(r2)
            if not found:
                continue
            c = target
            while True:
                r = came_from[c]
                old = col_of[r]
                col_of[r] = c
                row_of[c] = r
                if r == start:
                    break
                c = old
            col_of[i] = j
            row_of[j] = i
            break
        fixed_cols[col_of[i]] = True
    return col_of[:M].copy()


def lsap(C, return_potentials=False):
    """Solve min over injective sigma of sum_i C[i, sigma(i)].

    Parameters
    ----------
    C : array-like of shape (M, N), M <= N
        Cost matrix.
    return_potentials : bool, default=False
        Also return the dual potentials ``(phi, psi)`` satisfying
        ``phi[i] - psi[j] <= C[i, j]`` with equality on the assignment.

    Returns
    -------
    sigma : ndarray of shape (M,)
        Column assigned to each row. Among optimal assignments the
        lexicographically smallest is returned.
    cost : float
    phi, psi : ndarray
        Only when ``return_potentials`` is true.

    Examples
    --------
    >>> sigma, cost = lsap([[4.0, 1.0], [2.0, 3.0]])
    >>> sigma.tolist(), cost
    ([1, 0], 3.0)
    """
    C = _validate_cost(C)
    M, N = C.shape
    if M == 0:
        sigma, u, v = np.zeros(0, dtype=np.int64), np.zeros(0), np.zeros(N)
    else:
        sigma, u, v = _augmenting_paths(C)
        refined = _lexicographic_min(C, sigma, u, v)
        rows = np.arange(M)
        if C[rows, refined].sum() <= C[rows, sigma].sum():
            sigma = refined
    cost = float(C[np.arange(M), sigma].sum())
    if return_potentials:
        return sigma, cost, u, -v
    return sigma, cost

