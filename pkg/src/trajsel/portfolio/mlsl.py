"""Multi-level single linkage with BFGS local searches."""
from dataclasses import dataclass
from math import gamma as gamma_fn

import numpy as np

from ..bbob import LOWER, UPPER, BudgetExhausted, Objective
from .bfgs import BfgsConfig, bfgs_local


@dataclass(frozen=True)
class MlslConfig:
    batch_per_dim: int = 20      # uniform samples per phase, times D
    reduced_fraction: float = 0.1
    sigma: float = 4.0           # critical-distance constant
    local_evals_per_dim: int = 20


def critical_distance(n_samples: int, dim: int, sigma: float = 4.0, volume: float | None = None) -> float:
    if volume is None:
        volume = (UPPER - LOWER) ** dim
    inner = gamma_fn(1 + dim / 2) * volume * sigma * np.log(n_samples) / n_samples
    return float(inner ** (1.0 / dim) / np.sqrt(np.pi))


def run_mlsl(obj: Objective, rng, center=None, cfg: MlslConfig = MlslConfig(), log=None):
    """``log`` (a list) receives (start_point, start_value, radius, sample X, sample y)
    for every local search started, so callers can audit the start rule."""
    d = obj.dimension
    batch = cfg.batch_per_dim * d
    SX = np.empty((0, d))
    Sy = np.empty(0)
    started = np.zeros(0, dtype=bool)
    minima: list[np.ndarray] = []
    bcfg = BfgsConfig()
    try:
        while True:
            pts = rng.uniform(LOWER, UPPER, size=(batch, d))
            if center is not None and len(Sy) == 0:
                pts[0] = np.clip(center, LOWER, UPPER)
            vals = obj.batch(pts)
            SX = np.vstack([SX, pts])
            Sy = np.concatenate([Sy, vals])
            started = np.concatenate([started, np.zeros(batch, dtype=bool)])
            r = critical_distance(len(Sy), d, cfg.sigma)
            n_red = max(1, int(np.ceil(cfg.reduced_fraction * len(Sy))))
            reduced = np.argsort(Sy, kind="stable")[:n_red]
            for i in reduced:
                if started[i]:
                    continue
                dist = np.linalg.norm(SX[reduced] - SX[i], axis=1)
                if np.any((Sy[reduced] < Sy[i]) & (dist <= r)):
                    continue
                if minima and np.min(np.linalg.norm(np.array(minima) - SX[i], axis=1)) <= r:
                    continue
                started[i] = True
                if log is not None:
                    log.append((SX[i].copy(), Sy[i], r, SX[reduced].copy(), Sy[reduced].copy()))
                xm, _ = bfgs_local(obj, SX[i], Sy[i], max_evals=cfg.local_evals_per_dim * d, cfg=bcfg)
                minima.append(xm)
    except BudgetExhausted:
        pass
