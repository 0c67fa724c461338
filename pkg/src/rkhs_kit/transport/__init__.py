"""Discrete optimal transport solvers."""

from .gromov import gromov_monge, gromov_objective
from .lsap import lsap
from .martingale import MartingalePlan, martingale_ot
from .polar import polar_potential
from .sinkhorn import sinkhorn

__all__ = ["MartingalePlan", "gromov_monge", "gromov_objective", "lsap", "martingale_ot",
           "polar_potential", "sinkhorn"]
