"""Benchmark report container."""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import NumericalError


@dataclass
class BenchReport:
    """Named metrics of one benchmark run.

    Attributes
    ----------
    name : str
    params : dict
    metrics : dict of str to float
        Every value is finite; runtimes are in seconds.
    series : dict of str to ndarray
        Plot-ready columns of equal length.
    artifacts : list of str
        Paths of files written for this run.
    """

    name: str
    params: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)

    def __post_init__(self):
        bad = {k: v for k, v in self.metrics.items() if not np.isfinite(v)}
        if bad:
            raise NumericalError(f"benchmark '{self.name}' produced non-finite metrics",
                                 metrics={k: str(v) for k, v in bad.items()})

    def to_dict(self):
        return {"name": self.name, "params": dict(self.params),
                "metrics": {k: float(v) for k, v in self.metrics.items()},
                "artifacts": list(self.artifacts)}
