"""Switch-point capture and warm-start construction for the second algorithm."""
from dataclasses import dataclass

import numpy as np

from .bbob import LOWER, UPPER
from .portfolio.base import OptimizerKind, RunTrace, WarmStartSpec
from .portfolio.cmaes import CmaState
from .portfolio.de import DeConfig
from .portfolio.pso import PsoConfig

SPD_FLOOR = 1e-12


@dataclass(frozen=True)
class SwitchState:
    best_x: np.ndarray
    best_f: float
    cma_mean: np.ndarray
    cma_sigma: float
    cma_C: np.ndarray
    a1_trace_ref: str
    phase_boundary: int

    def to_record(self) -> dict:
        return {"best_x": self.best_x.tolist(), "best_f": self.best_f,
                "cma_mean": self.cma_mean.tolist(), "cma_sigma": self.cma_sigma,
                "cma_C": self.cma_C.ravel().tolist()}

    @classmethod
    def from_record(cls, rec: dict, a1_trace_ref: str = "", phase_boundary: int = 0):
        d = len(rec["best_x"])
        return cls(np.array(rec["best_x"]), float(rec["best_f"]), np.array(rec["cma_mean"]),
                   float(rec["cma_sigma"]), np.array(rec["cma_C"]).reshape(d, d),
                   a1_trace_ref, phase_boundary)


def capture(a1_trace: RunTrace, a1_state: CmaState, ref: str = "") -> SwitchState:
    if len(a1_trace) == 0:
        raise ValueError("cannot capture a switch state from an empty trace")
    k = a1_trace.best_index
    return SwitchState(a1_trace.X[k].copy(), float(a1_trace.y[k]), np.array(a1_state.mean),
                       float(a1_state.sigma), np.array(a1_state.C), ref, len(a1_trace))


def nearest_spd(M: np.ndarray, floor: float = SPD_FLOOR) -> np.ndarray:
    """Symmetrize; if not positive definite, floor the eigenvalues."""
    M = 0.5 * (M + M.T)
    ev, B = np.linalg.eigh(M)
    if ev.min() >= floor:
        return M
    return (B * np.maximum(ev, floor)) @ B.T


def warm_start(kind, s: SwitchState, seed: int) -> WarmStartSpec:
    kind = OptimizerKind(kind)
    center = s.best_x.copy()
    if kind == OptimizerKind.BFGS:
        return WarmStartSpec(kind, center, inverse_hessian=nearest_spd(s.cma_sigma ** 2 * s.cma_C))
    if kind in (OptimizerKind.DE, OptimizerKind.PSO):
        n = DeConfig().popsize if kind == OptimizerKind.DE else PsoConfig().swarm
        rng = np.random.default_rng(seed)
        pop = center + s.cma_sigma * rng.standard_normal((n, len(center)))
        return WarmStartSpec(kind, center, initial_population=np.clip(pop, LOWER, UPPER))
    return WarmStartSpec(kind, center)
