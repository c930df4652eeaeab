"""(mu/mu_w, lambda)-CMA-ES with default parameters and saturation at the bounds."""
from dataclasses import dataclass, replace

import numpy as np

from ..bbob import LOWER, UPPER, BudgetExhausted, Objective

DEFAULT_SIGMA0 = 0.2 * (UPPER - LOWER)


def cma_default_population_size(dim: int) -> int:
    if dim < 1:
        raise ValueError("dimension must be positive")
    return 4 + int(np.floor(3.0 * np.log(dim)))


@dataclass(frozen=True)
class CmaState:
    mean: np.ndarray
    sigma: float
    C: np.ndarray
    p_sigma: np.ndarray
    p_c: np.ndarray
    lam: int
    generation: int = 0

    @classmethod
    def initial(cls, mean, sigma=DEFAULT_SIGMA0, lam=None):
        mean = np.asarray(mean, dtype=float)
        d = len(mean)
        return cls(mean.copy(), float(sigma), np.eye(d), np.zeros(d), np.zeros(d),
                   lam or cma_default_population_size(d))


class CmaParams:
    def __init__(self, dim: int, lam: int):
        n = dim
        self.lam = lam
        self.mu = lam // 2
        w = np.log((lam + 1) / 2.0) - np.log(np.arange(1, self.mu + 1))
        self.weights = w / w.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)
        mueff = self.mueff
        self.cs = (mueff + 2) / (n + mueff + 5)
        self.ds = 1 + 2 * max(0.0, np.sqrt((mueff - 1) / (n + 1)) - 1) + self.cs
        self.cc = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
        self.c1 = 2 / ((n + 1.3) ** 2 + mueff)
        self.cmu = min(1 - self.c1, 2 * (mueff - 2 + 1 / mueff) / ((n + 2) ** 2 + mueff))
        self.chi_n = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n * n))


def repair_covariance(C: np.ndarray, floor_rel: float = 1e-14):
    """Symmetrize and floor eigenvalues. Returns (C, eigvals, eigvecs)."""
    C = 0.5 * (C + C.T)
    if not np.all(np.isfinite(C)):
        d = len(C)
        return np.eye(d), np.ones(d), np.eye(d)
    ev, B = np.linalg.eigh(C)
    top = max(float(ev.max()), 1e-300)
    floor = max(top * floor_rel, 1e-300)
    if ev.min() < floor:
        ev = np.maximum(ev, floor)
        C = (B * ev) @ B.T
        C = 0.5 * (C + C.T)
    return C, ev, B


def generation(obj: Objective, st: CmaState, par: CmaParams, rng) -> CmaState:
    """Sample, evaluate and update once. Raises BudgetExhausted mid-batch."""
    C, ev, B = repair_covariance(st.C)
    dvals = np.sqrt(ev)
    Z = rng.standard_normal((st.lam, len(st.mean)))
    Y = (Z * dvals) @ B.T
    X = np.clip(st.mean + st.sigma * Y, LOWER, UPPER)
    f = obj.batch(X)
    # steps are recomputed from the saturated points
    Y = (X - st.mean) / st.sigma
    sel = np.argsort(f, kind="stable")[:par.mu]
    yw = par.weights @ Y[sel]
    mean = st.mean + st.sigma * yw
    inv_sqrt = (B / dvals) @ B.T
    ps = (1 - par.cs) * st.p_sigma + np.sqrt(par.cs * (2 - par.cs) * par.mueff) * (inv_sqrt @ yw)
    g = st.generation + 1
    norm_ps = np.linalg.norm(ps)
    hsig = norm_ps / np.sqrt(1 - (1 - par.cs) ** (2 * g)) < (1.4 + 2 / (len(mean) + 1)) * par.chi_n
    pc = (1 - par.cc) * st.p_c + hsig * np.sqrt(par.cc * (2 - par.cc) * par.mueff) * yw
    Ys = Y[sel]
    rank_mu = (Ys.T * par.weights) @ Ys
    old = 1 - par.c1 - par.cmu + (1 - hsig) * par.c1 * par.cc * (2 - par.cc)
    C = old * C + par.c1 * np.outer(pc, pc) + par.cmu * rank_mu
    C, _, _ = repair_covariance(C)
    sigma = st.sigma * np.exp((par.cs / par.ds) * (norm_ps / par.chi_n - 1))
    sigma = float(np.clip(sigma, 1e-300, 1e10))
    return replace(st, mean=mean, sigma=sigma, C=C, p_sigma=ps, p_c=pc, generation=g)


def run_cmaes(obj: Objective, rng, center=None, sigma0: float = DEFAULT_SIGMA0) -> CmaState:
    """Run until the budget is gone; returns the state after the last full update."""
    d = obj.dimension
    if center is None:
        center = rng.uniform(LOWER + 1.0, UPPER - 1.0, size=d)
    st = CmaState.initial(center, sigma0)
    par = CmaParams(d, st.lam)
    try:
        while True:
            st = generation(obj, st, par, rng)
    except BudgetExhausted:
        pass
    return st
