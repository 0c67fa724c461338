from itertools import permutations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rkhs_kit import Kernel, KernelRegressor
from rkhs_kit._rng import latent_draws
from rkhs_kit.clustering import LinearAssignmentGain, balanced_assign, swap_descent
from rkhs_kit.generative import TransportGenerator
from rkhs_kit.io import read_pointset, write_pointset
from rkhs_kit.kernels import BASES, distance_matrix, gram, mmd
from rkhs_kit.operators import (
    classifier_fit,
    classifier_predict,
    divergence,
    evolve,
    gradient_operator,
    laplace_beltrami,
    projection_matrix,
    theta_generator,
)
from rkhs_kit.transport import (
    gromov_monge,
    gromov_objective,
    lsap,
    martingale_ot,
    sinkhorn,
)

seeds = st.integers(0, 2 ** 32 - 1)
bases = st.sampled_from(sorted(BASES))
pd_bases = st.sampled_from(sorted(n for n, c in BASES.items() if c.positive_definite))


def cloud(seed, n, d, scale=1.0):
    return scale * np.random.default_rng(seed).normal(size=(n, d))


# kernels

@given(seeds, bases, st.integers(1, 20), st.integers(1, 5))
def test_kernel_symmetry(seed, base, n, d):
    X, Y = cloud(seed, n, d), cloud(seed + 1, n, d)
    k = Kernel(base).fit(np.vstack([X, Y]))
    assert np.max(np.abs(gram(k, X, Y) - gram(k, Y, X).T)) <= 1e-12


@given(seeds, st.sampled_from(["gaussian", "matern"]), st.integers(2, 32), st.integers(1, 4))
def test_strictly_positive_bases_are_psd(seed, base, n, d):
    X = cloud(seed, n, d)
    assert np.linalg.eigvalsh(gram(Kernel(base), X, X)).min() >= -1e-8


@given(seeds, bases, st.integers(1, 64), st.integers(1, 4))
def test_self_discrepancy_vanishes(seed, base, n, d):
    X = cloud(seed, n, d)
    assert abs(mmd(Kernel(base), X, X)) <= 1e-10


@given(seeds, pd_bases, st.integers(1, 16), st.integers(1, 16), st.integers(1, 4))
def test_distance_matrix_nonnegative(seed, base, nx, ny, d):
    X, Y = cloud(seed, nx, d), cloud(seed + 1, ny, d, 2.0)
    assert distance_matrix(Kernel(base), X, Y).min() >= -1e-12


@given(seeds, bases, st.integers(2, 16), st.integers(1, 4))
def test_chain_equivalence(seed, base, n, d):
    X, Y = cloud(seed, n, d), cloud(seed + 1, 5, d)
    k = Kernel(base).fit(X)
    plain = Kernel(base, maps=()).fit(k.transform(X))
    diff = gram(k, X, Y) - gram(plain, k.transform(X), k.transform(Y))
    assert np.max(np.abs(diff)) <= 1e-12


# operators

@given(seeds, st.integers(1, 256), st.integers(1, 8))
@settings(max_examples=15)
def test_matern_reproduces_training_labels(seed, n, d):
    X = cloud(seed, n, d)
    f = np.sin(X).sum(axis=1)
    reg = KernelRegressor(epsilon=0.0).fit(X, f)
    assert np.max(np.abs(reg.predict(X) - f)) <= 1e-8


@given(seeds, st.integers(2, 30), st.integers(1, 3))
def test_projection_is_idempotent(seed, n, d):
    X = cloud(seed, n, d)
    P = projection_matrix(Kernel("matern"), X, X, Y=X[: max(1, n // 2)])
    assert np.max(np.abs(P @ P - P)) <= 1e-8


@given(seeds, st.integers(2, 32), st.integers(1, 3))
def test_laplacian_symmetric_psd(seed, n, d):
    L = laplace_beltrami(None, cloud(seed, n, d))
    assert np.max(np.abs(L - L.T)) <= 1e-8
    assert np.linalg.eigvalsh(0.5 * (L + L.T)).min() >= -1e-8 * max(1.0, np.abs(L).max())


@given(seeds, st.integers(2, 32), st.integers(1, 8), st.integers(1, 3))
def test_gradient_divergence_pairing(seed, n, nz, d):
    rng = np.random.default_rng(seed)
    X, Z = cloud(seed, n, d), cloud(seed + 1, nz, d)
    u, v = rng.normal(size=n), rng.normal(size=(nz, d))
    lhs = np.sum(np.einsum("zdn,n->zd", gradient_operator(None, X, Z=Z), u) * v)
    rhs = u @ divergence(None, X, v, Z=Z)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))


@given(seeds, st.integers(1, 8), st.floats(0.5, 1.0), st.floats(1e-3, 1.0))
def test_theta_scheme_is_stable_for_dissipative_operators(seed, n, theta, tau):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    A = -M @ M.T + (M - M.T)
    traj = evolve(theta_generator(A, theta, tau), rng.normal(size=n), 100)
    energy = np.linalg.norm(traj, axis=1)
    assert np.all(np.diff(energy) <= 1e-12 * max(1.0, energy[0]))


@given(seeds, st.integers(4, 20), st.integers(2, 4))
def test_classifier_rows_are_probabilities(seed, n, classes):
    labels = np.random.default_rng(seed).permutation(np.arange(n) % classes)
    model = classifier_fit(None, cloud(seed, n, 2), labels)
    P = classifier_predict(model, cloud(seed + 1, 10, 2))
    assert np.max(np.abs(P.sum(axis=1) - 1.0)) <= 1e-12
    assert np.all((P > 0) & (P < 1))


# clustering

@given(seeds, st.integers(1, 6), st.integers(1, 40))
def test_balanced_sizes_differ_by_at_most_one(seed, ny, nx):
    D = np.random.default_rng(seed).uniform(size=(ny, nx))
    sizes = np.bincount(balanced_assign(D), minlength=ny)
    assert sizes.sum() == nx and sizes.max() - sizes.min() <= 1


@given(seeds, st.integers(2, 10))
def test_swap_descent_never_increases_the_cost(seed, n):
    rng = np.random.default_rng(seed)
    C = rng.uniform(size=(n, n))
    start = rng.permutation(n)
    sigma = swap_descent(LinearAssignmentGain(C), start)
    rows = np.arange(n)
    assert C[rows, sigma].sum() <= C[rows, start].sum() + 1e-12
    assert np.array_equal(swap_descent(LinearAssignmentGain(C), start), sigma)


# transport

@given(seeds, st.integers(1, 6), st.integers(0, 3))
def test_lsap_matches_exhaustive_minimum(seed, m, extra):
    n = min(6, m + extra)
    C = np.random.default_rng(seed).uniform(size=(m, n))
    sigma, _ = lsap(C)
    best = min(sum(C[i, p[i]] for i in range(m)) for p in permutations(range(n), m))
    assert sum(C[i, sigma[i]] for i in range(m)) == best


@given(seeds, st.integers(1, 8), st.integers(0, 4))
def test_lsap_complementary_slackness(seed, m, extra):
    C = np.random.default_rng(seed).normal(size=(m, m + extra))
    sigma, _, phi, psi = lsap(C, return_potentials=True)
    slack = C - (phi[:, None] - psi[None, :])
    assert slack.min() >= -1e-9
    assert np.max(np.abs(slack[np.arange(m), sigma])) <= 1e-9


@given(seeds, st.integers(1, 10), st.floats(0.05, 2.0))
def test_sinkhorn_marginals_and_positivity(seed, n, eps):
    C = np.random.default_rng(seed).uniform(size=(n, n))
    P = sinkhorn(C, eps, tol=1e-9)
    assert np.max(np.abs(P.sum(axis=0) - 1)) <= 1e-9 + 1e-12
    assert np.max(np.abs(P.sum(axis=1) - 1)) <= 1e-9 + 1e-12
    assert np.all(P > 0)


@given(seeds, st.integers(2, 30), st.integers(1, 3))
def test_martingale_plan_preserves_means(seed, n, d):
    X, Y = cloud(seed, n, d), cloud(seed + 1, n, d, 1.5)
    out = martingale_ot(X, Y, max_iter=50)
    assert np.max(np.abs(out.plan.sum(axis=1) - 1)) <= 1e-10
    Xc, Yc = X - X.mean(axis=0), Y - Y.mean(axis=0)
    assert np.linalg.norm(Xc.mean(axis=0) - (out.plan @ Yc).mean(axis=0)) <= 1e-8


@given(seeds, st.integers(2, 10))
def test_gromov_objective_relabel_invariance(seed, n):
    rng = np.random.default_rng(seed)
    A, B = rng.normal(size=(n, 2)), rng.normal(size=(n, 2))
    DX = np.sqrt(((A[:, None] - A[None]) ** 2).sum(-1))
    DY = np.sqrt(((B[:, None] - B[None]) ** 2).sum(-1))
    sigma = gromov_monge(DX, DY)
    p = rng.permutation(n)
    a = gromov_objective(DX, DY, sigma)
    b = gromov_objective(DX[np.ix_(p, p)], DY[np.ix_(p, p)], np.argsort(p)[sigma[p]])
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


# generative

@given(seeds, st.integers(2, 40), st.integers(1, 2), st.integers(1, 2))
@settings(max_examples=15)
def test_generator_reproduces_nodes(seed, n, dx, dy):
    Y = cloud(seed, n, dy)
    gen = TransportGenerator(latent_dim=dx, seed=seed).fit(Y)
    assert np.max(np.abs(gen.generate(gen.latent_) - gen.data_sigma_)) <= 1e-8
    assert sorted(gen.permutation_.tolist()) == list(range(n))


@given(seeds, st.integers(1, 50), st.integers(1, 3), st.sampled_from(["normal", "uniform"]))
def test_latent_draws_are_seeded(seed, n, d, law):
    a = latent_draws(seed, n, d, law)
    assert np.array_equal(a, latent_draws(seed, n, d, law))
    assert a.shape == (n, d) and np.all(np.isfinite(a))


# io

@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 4)),
              elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_csv_round_trip_is_bit_exact(X):
    import io

    buf = io.StringIO()
    write_pointset(buf, X)
    buf.seek(0)
    back, _ = read_pointset(buf, header=False)
    # -0.0 is written as "-0" and read back with its sign
    assert np.array_equal(back.view(np.int64), X.view(np.int64))


@given(seeds, st.integers(1, 20), st.integers(1, 3), st.floats(0.0, 1e-3))
def test_regressor_json_round_trip(seed, n, d, eps):
    X = cloud(seed, n, d)
    reg = KernelRegressor(epsilon=eps).fit(X, np.cos(X).sum(axis=1))
    back = KernelRegressor.from_json(reg.to_json())
    Z = cloud(seed + 1, 7, d)
    assert np.array_equal(back.predict(Z), reg.predict(Z))
