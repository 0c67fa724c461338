"""Conditional expectation benchmark on a correlated Brownian basket."""

import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm

from .._rng import standard_normal, substream, uniform
from ..exceptions import ValidationError
from ..operators.regressor import KernelRegressor
from ..operators.smoothing import nadaraya_watson
from ..transport.martingale import martingale_ot
from .metrics import normalized_error
from .report import BenchReport

METHODS = ("mot", "nadaraya-watson", "kernel-ridge-naive")


def bachelier_reference(b, K, theta, t1, t2):
    """E[max(b_{t2} - K, 0) | b_{t1} = b] for b_t a Brownian motion of volatility theta.

    ``theta sqrt(t2 - t1) phi(d) + (b - K) Phi(d)`` with
    ``d = (b - K) / (theta sqrt(t2 - t1))``.

    Examples
    --------
    >>> round(float(bachelier_reference(0.0, 0.0, 0.2, 1.0, 2.0)), 7)
    0.0797885
    """
    if not t2 > t1:
        raise ValidationError("need t2 > t1")
    if not theta > 0:
        raise ValidationError("theta must be > 0")
    s = theta * np.sqrt(t2 - t1)
    m = np.asarray(b, dtype=float) - K
    d = m / s
    return s * norm.pdf(d) + m * norm.cdf(d)


@dataclass
class BachelierScenario:
    """Parameters of one Bachelier run; all draws derive from ``seed``."""

    N: int = 256
    D: int = 2
    theta: float = 0.2
    t1: float = 1.0
    t2: float = 2.0
    K: float = 0.0
    seed: int = 0

    def validate(self):
        if not self.t2 > self.t1 > 0:
            raise ValidationError("need t2 > t1 > 0")
        if not self.theta > 0:
            raise ValidationError("theta must be > 0")
        if int(self.N) < 2 or int(self.D) < 1:
            raise ValidationError("need N >= 2 and D >= 1")


def basket_model(D, theta, seed):
    """Random volatility matrix and basket weights with basket volatility theta.

    ``sigma`` has Gaussian entries and ``omega`` uniform entries with
    ``|omega|_1 = 1``; ``sigma`` is then scaled so ``|sigma^T omega| = theta``.
    """
    gen = substream(seed, "weights")
    sigma = standard_normal(gen, (D, D))
    omega = uniform(gen, D)
    omega /= omega.sum()
    sigma *= theta / np.linalg.norm(sigma.T @ omega)
    return sigma, omega


def simulate(scenario):
    """Samples X ~ X_t1, Y ~ X_t2 (pathwise continuation of X) and Z ~ X_t1."""
    s = scenario
    sigma, omega = basket_model(s.D, s.theta, s.seed)
    gen = substream(s.seed, "data")
    G = standard_normal(gen, (3, int(s.N), s.D))
    X = np.sqrt(s.t1) * G[0] @ sigma.T
    Y = X + np.sqrt(s.t2 - s.t1) * G[1] @ sigma.T
    Z = np.sqrt(s.t1) * G[2] @ sigma.T
    return X, Y, Z, omega


def _conditional_at_X(method, X, Y, payoff, kernel):
    if method == "mot":
        result = martingale_ot(X, Y, kernel=kernel)
        return result.plan @ payoff, result
    if method == "nadaraya-watson":
        return nadaraya_watson(kernel, X, payoff, X), None
    if method == "kernel-ridge-naive":
        return payoff, None
    raise ValidationError(f"unknown method '{method}'")


def run_bachelier(scenario, methods=METHODS, kernel=None):
    """Score every method against the Bachelier formula at fresh points Z.

    Each method estimates ``E[P(Y) | X]`` at the sample X. The estimates
    are extended to Z by kernel regression and compared with the exact
    value f(Z) through ``|f(Z) - pred| / (|f(Z)| + |pred|)``. The naive
    method regresses the payoffs themselves.

    Returns
    -------
    BenchReport
        Metrics ``score_<method>`` and ``runtime_<method>``; for "mot" also
        ``row_sum_error_mot`` and ``negative_mass_mot``.
    """
    scenario.validate()
    X, Y, Z, omega = simulate(scenario)
    payoff = np.maximum(Y @ omega - scenario.K, 0.0)
    exact = bachelier_reference(Z @ omega, scenario.K, scenario.theta, scenario.t1, scenario.t2)
    metrics = {}
    series = {"basket_z": Z @ omega, "exact": exact}
    for method in methods:
        start = time.perf_counter()
        fX, extra = _conditional_at_X(method, X, Y, payoff, kernel)
        pred = KernelRegressor(kernel=kernel).fit(X, fX).predict(Z)
        metrics[f"runtime_{method}"] = time.perf_counter() - start
        metrics[f"score_{method}"] = normalized_error(pred, exact)
        series[method] = pred
        if extra is not None:
            metrics["row_sum_error_mot"] = float(np.max(np.abs(extra.plan.sum(axis=1) - 1.0)))
            metrics["negative_mass_mot"] = float(-np.sum(np.minimum(extra.plan, 0.0)))
    return BenchReport(name="bachelier", params=asdict(scenario), metrics=metrics,
                       series=series)
