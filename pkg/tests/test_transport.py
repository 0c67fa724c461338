import math
from itertools import permutations

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from rkhs_kit import Kernel
from rkhs_kit.exceptions import ConvergenceError, ValidationError
from rkhs_kit.operators import gradient_operator
from rkhs_kit.transport import (
    gromov_monge,
    gromov_objective,
    lsap,
    martingale_ot,
    polar_potential,
    sinkhorn,
)

LSAP_TABLE = np.array([
    [0.2617057, 0.2469788, 0.9062546, 0.2495462],
    [0.2719497, 0.7593983, 0.4497398, 0.7767106],
    [0.0653662, 0.4875712, 0.0336136, 0.0626532],
    [0.9064375, 0.1392454, 0.5324207, 0.4110956],
])


def brute_force(C):
    M, N = C.shape
    return min(sum(C[i, p[i]] for i in range(M)) for p in permutations(range(N), M))


def pairwise(X):
    return np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))


# lsap

def test_lsap_table_golden_values():
    assert np.trace(LSAP_TABLE) == pytest.approx(1.465813, abs=1e-6)
    sigma, cost = lsap(LSAP_TABLE)
    assert cost == pytest.approx(0.6943549, abs=1e-7)
    # the table lists the row order of A[sigma]: row r sits on diagonal slot r
    row_order = np.argsort(sigma)
    assert row_order.tolist() == [1, 3, 2, 0]
    assert np.trace(LSAP_TABLE[row_order]) == pytest.approx(0.6943549, abs=1e-7)


def test_zero_diagonal_gives_identity():
    C = 1.0 - np.eye(5)
    sigma, cost = lsap(C)
    assert sigma.tolist() == list(range(5)) and cost == 0.0


def test_three_by_three_matches_all_permutations(rng):
    for _ in range(20):
        C = rng.uniform(size=(3, 3))
        assert lsap(C)[1] == pytest.approx(brute_force(C), rel=1e-15)


def test_rectangular_agrees_with_scipy(rng):
    C = rng.normal(size=(7, 11))
    sigma, cost = lsap(C)
    rows, cols = linear_sum_assignment(C)
    assert cost == pytest.approx(C[rows, cols].sum(), rel=1e-12)
    assert np.unique(sigma).size == 7


def test_ties_resolve_lexicographically():
    sigma, cost = lsap(np.zeros((3, 4)))
    assert sigma.tolist() == [0, 1, 2] and cost == 0.0
    sigma, _ = lsap([[1.0, 1.0], [1.0, 1.0]])
    assert sigma.tolist() == [0, 1]


def test_potentials_satisfy_complementary_slackness(rng):
    C = rng.uniform(size=(6, 8))
    sigma, cost, phi, psi = lsap(C, return_potentials=True)
    slack = C - (phi[:, None] - psi[None, :])
    assert slack.min() >= -1e-9
    assert np.max(np.abs(slack[np.arange(6), sigma])) <= 1e-9


def test_lsap_input_errors():
    with pytest.raises(ValidationError):
        lsap(np.ones((3, 2)))
    with pytest.raises(ValidationError):
        lsap([[0.0, np.inf], [1.0, 0.0]])


# sinkhorn

def test_constant_cost_gives_uniform_plan():
    P = sinkhorn(np.full((4, 4), 3.0), 0.5)
    np.testing.assert_allclose(P, 0.25, atol=1e-14)


def test_random_marginals(rng):
    P = sinkhorn(rng.uniform(size=(8, 8)), 0.1, tol=1e-10)
    assert np.max(np.abs(P.sum(axis=0) - 1)) <= 1e-8
    assert np.max(np.abs(P.sum(axis=1) - 1)) <= 1e-8
    assert np.all(P > 0)


def test_two_by_two_fixed_point():
    C = np.array([[0.0, 1.0], [0.5, 0.2]])
    eps = 0.7
    P = sinkhorn(C, eps, tol=1e-14)
    # a doubly stochastic 2x2 plan is [[p, 1-p], [1-p, p]]; the diagonal
    # scalings cancel in the cross ratio, leaving p^2 / (1-p)^2 = r
    r = math.exp(-(C[0, 0] + C[1, 1] - C[0, 1] - C[1, 0]) / eps)
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * mid / (1 - mid) ** 2 < r:
            lo = mid
        else:
            hi = mid
    np.testing.assert_allclose(P, [[lo, 1 - lo], [1 - lo, lo]], atol=1e-12)


def test_log_domain_agrees_and_survives_small_temperature(rng):
    C = rng.uniform(size=(6, 6))
    a = sinkhorn(C, 0.2, tol=1e-12, log_domain=False)
    b = sinkhorn(C, 0.2, tol=1e-12, log_domain=True)
    np.testing.assert_allclose(a, b, atol=1e-10)
    # exp(-C / epsilon) underflows to zero here outside the log domain
    P = sinkhorn(5 * C, 0.05, tol=1e-9)
    assert np.all(np.isfinite(P)) and np.all(P > 0)
    assert np.max(np.abs(P.sum(axis=1) - 1)) <= 1e-9
    P = sinkhorn(100 * C, 0.05, tol=1e-3)
    assert np.all(np.isfinite(P))


def test_sinkhorn_iteration_cap():
    C = np.random.default_rng(0).uniform(size=(5, 5))
    with pytest.raises(ConvergenceError) as err:
        sinkhorn(C, 0.01, tol=1e-15, max_iter=2)
    assert err.value.report["iterations"] == 2
    assert err.value.report["marginal_error"] > 1e-15


def test_sinkhorn_rejects_bad_input():
    with pytest.raises(ValidationError):
        sinkhorn(np.ones((2, 3)), 1.0)
    with pytest.raises(ValidationError):
        sinkhorn(np.ones((2, 2)), 0.0)


# martingale_ot

def test_identical_centered_sets_give_identity(rng):
    X = rng.normal(size=(10, 2))
    X -= X.mean(axis=0)
    out = martingale_ot(X, X.copy())
    np.testing.assert_allclose(out.plan, np.eye(10), atol=1e-12)
    assert out.residual <= 1e-12


def test_two_point_hand_oracle():
    X = np.array([[-1.0], [1.0]])
    Y = np.array([[-2.0], [2.0]])
    out = martingale_ot(X, Y)
    # X - Y = (1, -1), Y^T Y = 8: t = 1/8 brings Pi Y onto X exactly
    np.testing.assert_allclose(out.plan, [[0.75, 0.25], [0.25, 0.75]], atol=1e-12)
    np.testing.assert_allclose(out.plan @ Y, X, atol=1e-12)


def test_rows_sum_to_one_and_means_preserved(rng):
    X = rng.normal(size=(40, 2))
    Y = 1.5 * rng.normal(size=(40, 2))
    out = martingale_ot(X, Y, max_iter=200)
    assert np.max(np.abs(out.plan.sum(axis=1) - 1)) <= 1e-10
    Xc, Yc = X - X.mean(axis=0), Y - Y.mean(axis=0)
    assert np.linalg.norm(Xc.mean(axis=0) - (out.plan @ Yc).mean(axis=0)) <= 1e-8


def test_residuals_never_increase(rng):
    X = rng.normal(size=(30, 1))
    Y = 2.0 * rng.normal(size=(30, 1))
    out = martingale_ot(X, Y, max_iter=50)
    r = out.residuals
    assert all(b <= a * (1 + 1e-12) for a, b in zip(r, r[1:]))


def test_martingale_strict_mode_reports_failure(rng):
    X = rng.normal(size=(20, 1))
    Y = 2.0 * rng.normal(size=(20, 1))
    with pytest.raises(ConvergenceError) as err:
        martingale_ot(X, Y, max_iter=1, tol=1e-15, strict=True)
    assert "residual" in err.value.report


def test_martingale_size_mismatch(rng):
    with pytest.raises(ValidationError):
        martingale_ot(rng.normal(size=(3, 1)), rng.normal(size=(4, 1)))


# gromov_monge

def test_equal_distances_give_identity(rng):
    D = pairwise(rng.normal(size=(8, 2)))
    sigma, obj = gromov_monge(D, D, return_objective=True)
    assert sigma.tolist() == list(range(8)) and obj == 0.0


def test_sorted_lines_match_up_to_a_mirror(rng):
    x = np.sort(rng.uniform(0, 10, size=9))
    y = 1.05 * x + 0.01 * rng.normal(size=9)
    sigma = gromov_monge(pairwise(x[:, None]), pairwise(y[:, None]))
    assert sigma.tolist() in (list(range(9)), list(range(8, -1, -1)))


def test_four_points_exhaustive(rng):
    for _ in range(5):
        DX, DY = pairwise(rng.normal(size=(4, 2))), pairwise(rng.normal(size=(4, 2)))
        sigma, obj = gromov_monge(DX, DY, return_objective=True)
        best = min(gromov_objective(DX, DY, np.array(p)) for p in permutations(range(4)))
        neighbours = []
        for i in range(4):
            for j in range(i + 1, 4):
                s = sigma.copy()
                s[i], s[j] = s[j], s[i]
                neighbours.append(gromov_objective(DX, DY, s))
        assert obj <= best + 1e-12 or obj <= min(neighbours) + 1e-12


def test_gromov_objective_invariant_under_relabeling(rng):
    DX, DY = pairwise(rng.normal(size=(7, 2))), pairwise(rng.normal(size=(7, 2)))
    sigma = rng.permutation(7)
    p = rng.permutation(7)
    # relabel both clouds by p; the matching follows the labels
    sigma_p = np.argsort(p)[sigma[p]]
    a = gromov_objective(DX, DY, sigma)
    b = gromov_objective(DX[np.ix_(p, p)], DY[np.ix_(p, p)], sigma_p)
    assert a == pytest.approx(b, rel=1e-14)


def test_gromov_rejects_asymmetric_input():
    with pytest.raises(ValidationError):
        gromov_monge([[0.0, 1.0], [2.0, 0.0]], np.zeros((2, 2)))


# polar_potential

def _least_squares_residual(G, target):
    A = G.reshape(-1, G.shape[2])
    coef = np.linalg.lstsq(A, target.ravel(), rcond=None)[0]
    return np.linalg.norm(A @ coef - target.ravel())


def test_self_transport_residual_is_the_least_squares_residual(rng):
    X = rng.uniform(-1, 1, size=(20, 2))
    h = polar_potential(None, X, X)
    G = gradient_operator(None, X)
    fitted_field = np.einsum("zdn,n->zd", G, h)
    assert np.linalg.norm(fitted_field - X) == pytest.approx(_least_squares_residual(G, X),
                                                              rel=1e-6, abs=1e-9)


def test_matched_targets_residual_identity(rng):
    X = rng.uniform(-1, 1, size=(16, 2))
    Y = rng.normal(size=(16, 2))
    C = ((X[:, None] - Y[None]) ** 2).sum(-1)
    Ys = Y[lsap(C)[0]]
    h = polar_potential(None, X, Ys)
    G = gradient_operator(None, X)
    fitted_field = np.einsum("zdn,n->zd", G, h)
    assert np.linalg.norm(fitted_field - Ys) == pytest.approx(_least_squares_residual(G, Ys),
                                                               rel=1e-6)


@pytest.mark.xfail(strict=True, reason="node values of h are not constrained to be convex by "
                                       "the kernel gradient; see the decision ledger")
def test_monotone_pairing_gives_a_convex_potential(rng):
    x = np.sort(rng.uniform(-1, 1, size=24))
    y = np.sort(rng.normal(size=24))
    h = polar_potential(Kernel("gaussian"), x[:, None], y[:, None])
    slopes = np.diff(h) / np.diff(x)
    second = np.diff(slopes) / (0.5 * (x[2:] - x[:-2]))
    assert second.min() >= -1e-6
