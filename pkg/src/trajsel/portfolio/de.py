"""Differential evolution, best/1/bin with immediate replacement."""
from dataclasses import dataclass

import numpy as np

from ..bbob import LOWER, UPPER, BudgetExhausted, Objective


@dataclass(frozen=True)
class DeConfig:
    popsize: int = 15
    F: float = 0.8
    CR: float = 0.9

    def __post_init__(self):
        if self.popsize < 4 or not 0 < self.F <= 2 or not 0 <= self.CR <= 1:
            raise ValueError(f"invalid DE configuration {self}")


def run_de(obj: Objective, rng, population=None, cfg: DeConfig = DeConfig()):
    d = obj.dimension
    if population is None:
        population = rng.uniform(LOWER, UPPER, size=(cfg.popsize, d))
    pop = np.clip(np.array(population, dtype=float), LOWER, UPPER)
    n = len(pop)
    try:
        fit = obj.batch(pop)
        best = int(np.argmin(fit))
        while True:
            for i in range(n):
                r1, r2 = rng.choice(np.delete(np.arange(n), i), 2, replace=False)
                mutant = pop[best] + cfg.F * (pop[r1] - pop[r2])
                cross = rng.random(d) < cfg.CR
                cross[rng.integers(d)] = True
                trial = np.where(cross, mutant, pop[i])
                # out-of-range coordinates are redrawn uniformly, as the reference solver does
                out = (trial < LOWER) | (trial > UPPER)
                if out.any():
                    trial[out] = rng.uniform(LOWER, UPPER, size=int(out.sum()))
                ft = obj(trial)
                if ft <= fit[i]:
                    pop[i], fit[i] = trial, ft
                    if ft <= fit[best]:
                        best = i
    except BudgetExhausted:
        pass
