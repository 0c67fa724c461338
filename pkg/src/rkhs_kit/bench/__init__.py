"""Benchmarks and metrics."""

from .bachelier import (
                        BachelierScenario,
                        bachelier_reference,
                        basket_model,
                        run_bachelier,
                        simulate,
)
from .metrics import (
                        accuracy,
                        confusion,
                        ks,
                        ks_critical,
                        metrics,
                        moments,
                        normalized_error,
                        rmse,
)
from .pde import run_heat, run_poisson
from .report import BenchReport

__all__ = [
    "BachelierScenario", "BenchReport", "accuracy", "bachelier_reference", "basket_model",
    "confusion", "ks", "ks_critical", "metrics", "moments", "normalized_error", "rmse",
    "run_bachelier", "run_heat", "run_poisson", "simulate",
]
