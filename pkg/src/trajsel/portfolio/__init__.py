from .base import ALGORITHMS, OptimizerKind, RunTrace, WarmStartSpec
from .bfgs import BfgsConfig, bfgs_gradient, bfgs_local
from .cmaes import CmaState, cma_default_population_size
from .de import DeConfig
from .mlsl import MlslConfig, critical_distance
from .pso import PsoConfig
from .runner import run

__all__ = ["ALGORITHMS", "OptimizerKind", "RunTrace", "WarmStartSpec", "BfgsConfig",
           "bfgs_gradient", "bfgs_local", "CmaState", "cma_default_population_size",
           "DeConfig", "MlslConfig", "critical_distance", "PsoConfig", "run"]
