"""Kernel regression and the operators built on it."""

from ._core import DEFAULT_EPSILON
from .classifier import (
    KernelClassifier,
    classifier_fit,
    classifier_gradient,
    classifier_predict,
)
from .differential import (
    boundary_project,
    divergence,
    gradient_operator,
    helmholtz_hodge,
    hessian_operator,
    inv_laplace,
    laplace_beltrami,
    leray,
    leray_matrix,
)
from .linalg import pinv_sym, sym_solve
from .regressor import (
    IdentityResidual,
    KernelRegressor,
    fit_regressor,
    partition_of_unity,
    projection_matrix,
)
from .smoothing import denoise, nadaraya_watson, nadaraya_watson_weights
from .time_stepping import evolve, theta_generator, theta_step, vandermonde_weights


def predict(reg, Z):
    return reg.predict(Z)


def gradient(reg, Z):
    return reg.gradient(Z)


def taylor2(reg, x0, Z):
    return reg.taylor2(x0, Z)


__all__ = [
    "DEFAULT_EPSILON", "IdentityResidual", "KernelClassifier", "KernelRegressor",
    "boundary_project", "classifier_fit", "classifier_gradient", "classifier_predict",
    "denoise", "divergence", "evolve", "fit_regressor", "gradient", "gradient_operator",
    "helmholtz_hodge", "hessian_operator", "inv_laplace", "laplace_beltrami", "leray",
    "leray_matrix", "nadaraya_watson", "nadaraya_watson_weights", "partition_of_unity",
    "pinv_sym", "predict", "projection_matrix", "sym_solve", "taylor2", "theta_generator",
    "theta_step", "vandermonde_weights",
]
