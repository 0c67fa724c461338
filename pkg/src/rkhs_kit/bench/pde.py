"""Poisson and heat equation demos on point clouds."""

import time

import numpy as np

from .._validation import check_points, check_square, check_values
from ..exceptions import ValidationError
from ..operators.differential import PINV_RTOL, laplace_beltrami
from ..operators.linalg import pinv_sym
from ..operators.time_stepping import evolve, theta_generator
from .report import BenchReport


def run_poisson(mesh, f_values, kernel=None, rtol=PINV_RTOL):
    """Least-squares solve of ``Laplace_k u = f`` on the mesh.

    The relative residual ``|Laplace_k u - f| / |f|`` is zero when f lies
    in the range of the operator. The solution is in ``series["u"]``.
    """
    X = check_points(mesh, "mesh")
    F, _ = check_values(f_values, X.shape[0], "f_values")
    start = time.perf_counter()
    L = laplace_beltrami(kernel, X)
    U = pinv_sym(L, rtol) @ F
    runtime = time.perf_counter() - start
    nf = np.linalg.norm(F)
    residual = float(np.linalg.norm(L @ U - F) / nf) if nf > 0 else float(np.linalg.norm(L @ U))
    series = {f"x{d}": X[:, d] for d in range(X.shape[1])}
    series.update({f"u{j}" if U.shape[1] > 1 else "u": U[:, j] for j in range(U.shape[1])})
    return BenchReport(name="poisson", params={"N": X.shape[0], "D": X.shape[1]},
                       metrics={"residual": residual, "runtime": runtime}, series=series)


def run_heat(mesh, u0, theta=1.0, tau=0.01, steps=100, kernel=None, operator=None):
    """Theta-scheme integration of ``du/dt = A u`` with ``A = -Laplace_k``.

    Since the kernel Laplace-Beltrami matrix is positive semi-definite, the
    sign flip makes the flow dissipative. ``operator`` replaces A with a
    given square matrix. The energy ``|u^n|`` is reported per step in
    ``series["energy"]``.
    """
    u = np.asarray(u0, dtype=float)
    if operator is None:
        X = check_points(mesh, "mesh")
        A = -laplace_beltrami(kernel, X)
    else:
        A = check_square(operator, "operator")
    if u.shape[0] != A.shape[0]:
        raise ValidationError(f"u0 has {u.shape[0]} rows, operator has size {A.shape[0]}")
    start = time.perf_counter()
    B = theta_generator(A, theta, tau)
    traj = evolve(B, u, steps)
    runtime = time.perf_counter() - start
    energy = np.linalg.norm(traj.reshape(traj.shape[0], -1), axis=1)
    e0 = energy[0] if energy[0] > 0 else 1.0
    metrics = {"energy_initial": float(energy[0]), "energy_final": float(energy[-1]),
               "max_energy_increase": float(np.max(np.diff(energy), initial=0.0)),
               "max_relative_energy_drift": float(np.max(np.abs(energy - energy[0])) / e0),
               "runtime": runtime}
    return BenchReport(name="heat",
                       params={"theta": theta, "tau": tau, "steps": int(steps)},
                       metrics=metrics,
                       series={"step": np.arange(traj.shape[0]), "energy": energy})
