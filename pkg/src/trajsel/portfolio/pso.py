"""Global-best particle swarm with clipped velocities."""
from dataclasses import dataclass

import numpy as np

from ..bbob import LOWER, UPPER, BudgetExhausted, Objective


@dataclass(frozen=True)
class PsoConfig:
    swarm: int = 40
    w: float = 0.72
    c1: float = 1.49
    c2: float = 1.49
    vmax_fraction: float = 0.2


def run_pso(obj: Objective, rng, positions=None, cfg: PsoConfig = PsoConfig(), on_step=None):
    """``on_step(velocities)`` is called after every velocity update (for tests)."""
    d = obj.dimension
    vmax = cfg.vmax_fraction * (UPPER - LOWER)
    if positions is None:
        positions = rng.uniform(LOWER, UPPER, size=(cfg.swarm, d))
    x = np.clip(np.array(positions, dtype=float), LOWER, UPPER)
    v = np.zeros_like(x)
    try:
        f = obj.batch(x)
        pbest, pval = x.copy(), f.copy()
        g = int(np.argmin(pval))
        while True:
            r1 = rng.random(x.shape)
            r2 = rng.random(x.shape)
            v = cfg.w * v + cfg.c1 * r1 * (pbest - x) + cfg.c2 * r2 * (pbest[g] - x)
            v = np.clip(v, -vmax, vmax)
            if on_step is not None:
                on_step(v)
            x = np.clip(x + v, LOWER, UPPER)
            f = obj.batch(x)
            better = f < pval
            pbest[better], pval[better] = x[better], f[better]
            g = int(np.argmin(pval))
    except BudgetExhausted:
        pass
