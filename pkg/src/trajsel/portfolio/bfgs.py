"""Quasi-Newton BFGS on finite-difference gradients."""
from dataclasses import dataclass

import numpy as np

from ..bbob import LOWER, UPPER, BudgetExhausted, Objective

SQRT_EPS = np.sqrt(np.finfo(float).eps)


@dataclass(frozen=True)
class BfgsConfig:
    c1: float = 1e-4          # sufficient decrease
    curvature_tol: float = 1e-12  # update only if s'y > tol * |s| |y|
    shrink: float = 0.5
    max_backtracks: int = 30
    gtol: float = 1e-8


def bfgs_gradient(obj: Objective, x, fx: float) -> np.ndarray:
    """Forward differences; costs exactly D counted evaluations.

    With too little budget left, the affordable leading probes are still
    evaluated and logged before ``BudgetExhausted`` propagates.
    """
    x = np.asarray(x, dtype=float)
    h = SQRT_EPS * np.maximum(1.0, np.abs(x))
    h = np.where(x + h > UPPER, -h, h)  # backward difference on the upper bound
    probes = x + np.diag(h)
    h = np.diag(probes) - x  # the step actually representable in floating point
    return (obj.batch(probes) - fx) / h


def _backtrack(alpha, f0, fa, slope, shrink):
    """Next trial step: minimizer of the quadratic through f0, slope and f(alpha),
    kept within [0.1, shrink] times the current step."""
    if not np.isfinite(fa):
        return alpha * shrink
    denom = 2.0 * (fa - f0 - slope * alpha)
    cand = -slope * alpha * alpha / denom if denom > 0 else alpha * shrink
    return float(np.clip(cand, 0.1 * alpha, shrink * alpha))


def _free(x, p):
    return np.where(((x >= UPPER) & (p > 0)) | ((x <= LOWER) & (p < 0)), 0.0, p)


def bfgs_local(obj: Objective, x0, f0=None, H0=None, max_evals=None, cfg: BfgsConfig = BfgsConfig()):
    """One BFGS descent from ``x0``.

    Trial points are projected onto the box; coordinates sitting on a bound
    with the step pointing outward are frozen for that iteration. Stops on
    convergence, on a failed line search along the gradient, or after
    ``max_evals`` evaluations (checked between iterations). Returns (x, f).
    BudgetExhausted propagates.
    """
    start = obj.budget.used
    x = np.array(x0, dtype=float)
    d = len(x)
    f = obj(x) if f0 is None else float(f0)
    g = bfgs_gradient(obj, x, f)
    H = np.eye(d) if H0 is None else np.array(H0, dtype=float)
    scaled = False
    while max_evals is None or obj.budget.used - start < max_evals:
        if not np.all(np.isfinite(g)) or np.max(np.abs(g)) < cfg.gtol:
            break
        p = _free(x, -H @ g)
        slope = g @ p
        if not np.isfinite(slope) or slope >= 0:
            H = np.eye(d)
            p = _free(x, -g)
            slope = g @ p
        if not np.any(p):
            break
        alpha, accepted = 1.0, False
        for _ in range(cfg.max_backtracks):
            xn = np.clip(x + alpha * p, LOWER, UPPER)
            fn = obj(xn)
            if np.isfinite(fn) and fn <= f + cfg.c1 * (g @ (xn - x)):
                accepted = True
                break
            alpha = _backtrack(alpha, f, fn, slope, cfg.shrink)
        if not accepted:
            if np.array_equal(H, np.eye(d)):
                break
            H = np.eye(d)  # retry along steepest descent
            continue
        gn = bfgs_gradient(obj, xn, fn)
        s, yv = xn - x, gn - g
        sy = s @ yv
        if sy > cfg.curvature_tol * np.linalg.norm(s) * np.linalg.norm(yv):
            if not scaled:
                # rescale the initial matrix once so its magnitude matches observed curvature
                H = H * (sy / (yv @ H @ yv))
                scaled = True
            rho = 1.0 / sy
            V = np.eye(d) - rho * np.outer(s, yv)
            H = V @ H @ V.T + rho * np.outer(s, s)
            H = 0.5 * (H + H.T)
        x, f, g = xn, fn, gn
    return x, f


def run_bfgs(obj: Objective, x0, H0=None, cfg: BfgsConfig = BfgsConfig()):
    """Spend the whole budget. After convergence the incumbent is re-polished
    with a fresh identity inverse Hessian; each pass costs at least D+1 evaluations."""
    x, f, H = np.asarray(x0, dtype=float), None, H0
    try:
        while True:
            x, f = bfgs_local(obj, x, f, H, cfg=cfg)
            H = None
    except BudgetExhausted:
        pass
