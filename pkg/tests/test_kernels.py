import json
import math

import numpy as np
import pytest

from rkhs_kit.exceptions import (
    ConfigurationError,
    DegenerateScaleError,
    ValidationError,
)
from rkhs_kit.kernels import (
    BASES,
    Kernel,
    MapChain,
    combine_kernels,
    distance_matrix,
    eval_kernel,
    fit_map,
    gram,
    make_map,
    mmd,
    mmd_distance,
)

E1 = math.exp(-1.0)


def fitted_id(base, X, params=()):
    return Kernel(base, params=params, maps=()).fit(X)


# eval_kernel

def test_gaussian_at_coincident_points_is_one():
    k = fitted_id("gaussian", np.zeros((1, 1)))
    assert eval_kernel(k, [0.0], [0.0]) == 1.0


def test_relu_vanishes_outside_unit_support():
    k = fitted_id("relu", np.zeros((1, 1)))
    assert eval_kernel(k, [0.0], [2.0]) == 0.0
    assert eval_kernel(k, [0.0], [0.25]) == pytest.approx(0.75)


def test_matern_unit_distance():
    k = fitted_id("matern", np.zeros((1, 1)))
    assert eval_kernel(k, [0.0], [1.0]) == pytest.approx(0.3678794, abs=5e-8)


def test_unfitted_stateful_map_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        Kernel().gram(np.zeros((2, 1)))


def test_dimension_mismatch_is_rejected():
    k = fitted_id("matern", np.zeros((1, 2)))
    with pytest.raises(ValidationError):
        k.gram(np.zeros((3, 1)))
    with pytest.raises(ValidationError):
        eval_kernel(k, [0.0, 1.0], [0.0])


def test_unknown_kernel_name():
    with pytest.raises(ValidationError):
        Kernel("nope").fit(np.zeros((1, 1)))


@pytest.mark.parametrize("base,params", [("multiquadric", (0.0,)), ("polynomial", (1.5,)),
                                         ("polynomial", (0.0,))])
def test_invalid_base_parameters(base, params):
    with pytest.raises(ValidationError):
        Kernel(base, params=params).fit(np.zeros((2, 1)))


# fit_map

def test_unit_cube_state_read_off_the_data():
    X = np.array([[-1.0], [0.0], [0.5], [1.0]])
    chain = fit_map(["unit-cube"], X)
    # min -1, range 2, midpoint grid of 4 cells: -1 -> 0.5 / 4
    assert chain.transform(np.array([[-1.0]]))[0, 0] == pytest.approx(0.125)
    assert chain.transform(np.array([[1.0]]))[0, 0] == pytest.approx(0.875)


def test_std_dev_of_two_points():
    chain = fit_map(["std-dev"], np.array([[0.0], [2.0]]))
    # population std of {0, 2} is 1
    assert chain.transform(np.array([[3.0], [-1.5]])).ravel().tolist() == [3.0, -1.5]


def test_bandwidth_is_stateless_scaling():
    chain = fit_map([{"map": "bandwidth", "h": 2.0}], np.array([[5.0], [7.0]]))
    assert chain.transform(np.array([[1.25]]))[0, 0] == 2.5


def test_min_distance_degenerate_scale():
    with pytest.raises(DegenerateScaleError):
        fit_map(["min-distance"], np.ones((3, 2)))


def test_mean_distance_gives_unit_mean_squared_distance(rng):
    X = rng.normal(size=(20, 3))
    U = fit_map(["mean-distance"], X).transform(X)
    # alpha averages |x^i - x^k|^2 over all N^2 ordered pairs
    d2 = np.sum((U[:, None] - U[None]) ** 2, axis=-1)
    assert np.mean(d2) == pytest.approx(1.0, rel=1e-12)


def test_map_jet_matches_finite_differences(rng):
    X = rng.normal(size=(15, 2))
    chain = MapChain().fit(X)
    Z = rng.normal(size=(5, 2)) * 0.5
    S, d1, d2 = chain.jet(Z)
    h = 1e-5
    Sp, Sm = chain.transform(Z + h), chain.transform(Z - h)
    np.testing.assert_allclose(d1, (Sp - Sm) / (2 * h), rtol=1e-6)
    np.testing.assert_allclose(d2, (Sp - 2 * S + Sm) / h ** 2, rtol=1e-3, atol=1e-4)


# gram

def test_matern_gram_two_points():
    X = np.array([[0.0], [1.0]])
    np.testing.assert_allclose(gram(fitted_id("matern", X), X, X), [[1, E1], [E1, 1]],
                               rtol=0, atol=1e-15)


def test_rectangular_gram_equals_entrywise_loop(rng):
    X, Y = rng.normal(size=(3, 2)), rng.normal(size=(2, 2))
    k = Kernel().fit(np.vstack([X, Y]))
    loop = np.array([[eval_kernel(k, x, y) for y in Y] for x in X])
    assert np.array_equal(gram(k, X, Y), loop)


@pytest.mark.parametrize("base", sorted(BASES))
def test_gram_symmetric_with_kernel_diagonal(base, rng):
    X = rng.uniform(-1, 1, size=(12, 3))
    k = Kernel(base).fit(X)
    K = gram(k, X, X)
    assert np.max(np.abs(K - K.T)) <= 1e-12
    np.testing.assert_allclose(np.diag(K), [k(x, x) for x in X], rtol=0, atol=1e-12)


# distance_matrix

def test_distance_matrix_zero_diagonal(rng):
    X = rng.normal(size=(10, 2))
    assert np.all(np.diag(distance_matrix(Kernel(), X, X)) == 0.0)


def test_distance_gaussian_same_point():
    k = fitted_id("gaussian", np.zeros((1, 1)))
    assert distance_matrix(k, [[0.0]], [[0.0]])[0, 0] == 0.0


def test_distance_matern_unit_gap():
    k = fitted_id("matern", np.zeros((1, 1)))
    assert distance_matrix(k, [[0.0]], [[1.0]])[0, 0] == pytest.approx(1.2642411, abs=5e-8)
    assert distance_matrix(k, [[0.0]], [[1.0]])[0, 0] == pytest.approx(2 - 2 * E1, rel=1e-15)


# mmd

@pytest.mark.parametrize("base", sorted(BASES))
def test_mmd_self_is_zero(base, rng):
    X = rng.uniform(-1, 1, size=(17, 2))
    assert abs(mmd(Kernel(base), X, X)) <= 1e-10


def test_mmd_singletons():
    k = fitted_id("matern", np.zeros((1, 1)))
    x, y = np.array([[0.3]]), np.array([[-0.4]])
    expected = k(x[0], x[0]) + k(y[0], y[0]) - 2 * k(x[0], y[0])
    assert mmd(k, x, y) == pytest.approx(expected, rel=1e-14)


def test_mmd_two_against_one_hand_sum():
    k = fitted_id("matern", np.zeros((1, 1)))
    X, Y = np.array([[0.0], [1.0]]), np.array([[2.0]])
    # (1/4)(k00 + 2 k01 + k11) + k(y,y) - (2/2)(k(0,2) + k(1,2))
    expected = 0.25 * (1 + 2 * E1 + 1) + 1 - (math.exp(-2) + E1)
    assert mmd(k, X, Y) == pytest.approx(expected, rel=1e-14)


def test_mmd_symmetric_and_sqrt_accessor(rng):
    X, Y = rng.normal(size=(9, 2)), rng.normal(size=(7, 2)) + 1
    k = Kernel()
    assert mmd(k, X, Y) == pytest.approx(mmd(k, Y, X), rel=1e-12)
    assert mmd_distance(k, X, Y) == pytest.approx(math.sqrt(mmd(k, X, Y)))
    assert mmd_distance(k, X, X) == 0.0


def test_mmd_empty_set():
    with pytest.raises(ValidationError):
        mmd(Kernel(), np.zeros((0, 1)), np.zeros((2, 1)))


# combine_kernels

def test_add_zero_and_multiply_ones(rng):
    X = rng.normal(size=(6, 2))
    K = gram(Kernel().fit(X), X)
    assert np.array_equal(combine_kernels("add", [K, np.zeros_like(K)]), K)
    assert np.array_equal(combine_kernels("multiply", [K, np.ones_like(K)]), K)


def test_add_and_multiply_kernel_operands(rng):
    X = rng.normal(size=(5, 2))
    k1, k2 = Kernel("gaussian"), Kernel("matern")
    K1, K2 = gram(k1, X, X), gram(k2, X, X)
    np.testing.assert_allclose(combine_kernels("add", [k1, k2], X=X), K1 + K2)
    np.testing.assert_allclose(combine_kernels("multiply", [k1, k2], X=X), K1 * K2)


def test_convolve_is_a_matrix_product(rng):
    A, B = rng.normal(size=(3, 4)), rng.normal(size=(4, 2))
    np.testing.assert_allclose(combine_kernels("convolve", [A, B]), A @ B)
    with pytest.raises(ValidationError):
        combine_kernels("convolve", [A, A])


def test_pipe_linear_then_matern_reproduces_affine_function():
    X = np.linspace(-1, 1, 5)[:, None]
    Z = np.array([[0.3], [1.7], [-2.5]])
    f = 2 * X[:, 0] + 1
    # polynomial p = 1 is the linear kernel 1 + x y; two basis sites give
    # the 2x2 least-squares normal equations of a straight-line fit
    k1 = Kernel("polynomial", params=(1,), maps=())
    k2 = Kernel("matern", maps=())
    P = combine_kernels("pipe", [k1, k2], X=X, Y=(X[[0, 4]], None), Z=Z)
    V = np.column_stack([np.ones(5), X[:, 0]])
    coef = np.linalg.solve(V.T @ V, V.T @ f)
    oracle = coef[0] + coef[1] * Z[:, 0]
    np.testing.assert_allclose(oracle, 2 * Z[:, 0] + 1, atol=1e-12)
    np.testing.assert_allclose(P @ f, oracle, atol=1e-8)


def test_unknown_combination_mode():
    with pytest.raises(ValidationError):
        combine_kernels("stack", [np.eye(2), np.eye(2)])


# invariants

@pytest.mark.parametrize("base", ["gaussian", "matern"])
def test_positive_definite_bases_have_nonnegative_spectrum(base, rng):
    X = rng.normal(size=(32, 2))
    K = gram(Kernel(base), X, X)
    assert np.linalg.eigvalsh(K).min() >= -1e-8


@pytest.mark.parametrize("base", sorted(n for n, c in BASES.items() if c.positive_definite))
def test_distance_matrix_nonnegative_for_positive_kernels(base, rng):
    X, Y = rng.normal(size=(10, 2)), rng.normal(size=(8, 2))
    assert distance_matrix(Kernel(base), X, Y).min() >= -1e-12


def test_chain_equals_identity_chain_on_mapped_points(rng):
    X, Y = rng.normal(size=(8, 3)), rng.normal(size=(5, 3))
    k = Kernel("gaussian").fit(X)
    plain = Kernel("gaussian", maps=()).fit(k.transform(X))
    diff = k.gram(X, Y) - plain.gram(k.transform(X), k.transform(Y))
    assert np.max(np.abs(diff)) <= 1e-12


def test_kernel_spec_json_round_trip():
    k = Kernel("multiquadric", params=(0.5,), maps=("std-dev", {"map": "bandwidth", "h": 2.0}))
    data = json.loads(k.to_json())
    assert data == {"kernel": "multiquadric", "params": [0.5],
                    "maps": ["std-dev", {"map": "bandwidth", "h": 2.0}]}
    back = Kernel.from_json(k.to_json())
    X = np.linspace(0, 1, 4)[:, None]
    assert np.array_equal(back.fit(X).gram(X), k.fit(X).gram(X))


def test_kernel_spec_rejects_unknown_fields_and_maps():
    with pytest.raises(ValidationError):
        Kernel.from_dict({"kernel": "matern", "bogus": 1})
    with pytest.raises(ValidationError):
        Kernel.from_dict({"kernel": "matern", "maps": ["warp"]})
    with pytest.raises(ValidationError):
        make_map("nope")
