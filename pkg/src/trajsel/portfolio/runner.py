"""Single entry point: run one optimizer on one instance with an exact budget."""
import numpy as np

from ..bbob import EvaluationBudget, Objective, ProblemInstance
from .base import OptimizerKind, RunTrace, WarmStartSpec
from .bfgs import run_bfgs
from .cmaes import run_cmaes
from .de import run_de
from .mlsl import run_mlsl
from .pso import run_pso


def run(kind, inst: ProblemInstance, budget: EvaluationBudget, seed: int,
        init: WarmStartSpec | None = None) -> RunTrace:
    """Run ``kind`` until ``budget`` is spent.

    The trace always holds exactly ``budget.limit`` samples. For CMA-ES the
    final strategy state is attached as ``trace.final_state``.
    """
    kind = OptimizerKind(kind)
    if init is not None and OptimizerKind(init.kind) != kind:
        raise ValueError(f"warm start for {init.kind} passed to {kind}")
    rng = np.random.default_rng(seed)
    obj = Objective(inst, budget)
    center = None if init is None else np.asarray(init.initial_center, dtype=float)
    state = None
    if kind == OptimizerKind.CMAES:
        state = run_cmaes(obj, rng, center)
    elif kind == OptimizerKind.DE:
        run_de(obj, rng, None if init is None else init.initial_population)
    elif kind == OptimizerKind.PSO:
        run_pso(obj, rng, None if init is None else init.initial_population)
    elif kind == OptimizerKind.MLSL:
        run_mlsl(obj, rng, center)
    elif kind == OptimizerKind.BFGS:
        x0 = center if center is not None else np.zeros(inst.dimension)
        run_bfgs(obj, x0, None if init is None else init.inverse_hessian)
    X, y = obj.samples()
    meta = {"function": inst.id.function_id, "instance": inst.id.instance_id,
            "dim": inst.dimension, "algorithm": kind.value, "seed": int(seed),
            "phase_boundary": 0}
    return RunTrace(meta, X, y, final_state=state)
