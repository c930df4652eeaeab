"""Problem identity, budgets, and counted evaluation."""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .functions import build

LOWER, UPPER = -5.0, 5.0


class BudgetExhausted(Exception):
    """Raised when a run asks for an evaluation past its budget."""


@dataclass(frozen=True)
class ProblemId:
    function_id: int
    instance_id: int
    dimension: int

    def __post_init__(self):
        if not 1 <= int(self.function_id) <= 24:
            raise ValueError(f"function_id must be in 1..24, got {self.function_id}")
        if int(self.instance_id) < 1:
            raise ValueError(f"instance_id must be >= 1, got {self.instance_id}")
        if int(self.dimension) < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """Immutable benchmark problem. Safe to share between runs."""
    id: ProblemId
    x_opt: np.ndarray
    f_opt: float
    transform_seed: int
    _fn: object = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.id.dimension

    @property
    def bounds(self):
        return LOWER, UPPER

    def values(self, X) -> np.ndarray:
        """Uncounted batch evaluation of row vectors."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dimension:
            raise ValueError(f"expected {self.dimension} columns, got {X.shape[1]}")
        # far outside the domain some transforms overflow; inf is a valid value there
        with np.errstate(over="ignore", invalid="ignore"):
            return self._fn.values(X)

    def __call__(self, x) -> float:
        return float(self.values(x)[0])


@lru_cache(maxsize=None)
def _instantiate(fid: int, iid: int, dim: int) -> ProblemInstance:
    pid = ProblemId(fid, iid, dim)
    fn = build(fid, iid, dim)
    return ProblemInstance(pid, fn.x_opt, fn.f_opt, fid + 10000 * iid, fn)


def instantiate(pid: ProblemId | tuple) -> ProblemInstance:
    if not isinstance(pid, ProblemId):
        pid = ProblemId(*pid)
    return _instantiate(int(pid.function_id), int(pid.instance_id), int(pid.dimension))


@dataclass
class EvaluationBudget:
    limit: int
    used: int = 0

    def __post_init__(self):
        if self.limit <= 0:
            raise ValueError("budget limit must be positive")

    @property
    def remaining(self) -> int:
        return self.limit - self.used


class Objective:
    """Counted evaluation of one instance that logs every sample.

    Batches are evaluated in row order; when the budget runs out mid-batch the
    leading rows are still evaluated and logged before ``BudgetExhausted``.
    """

    def __init__(self, inst: ProblemInstance, budget: EvaluationBudget):
        self.inst = inst
        self.budget = budget
        self._X: list[np.ndarray] = []
        self._y: list[np.ndarray] = []

    @property
    def dimension(self) -> int:
        return self.inst.dimension

    def batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        k = min(len(X), self.budget.remaining)
        if k > 0:
            y = self.inst.values(X[:k])
            self.budget.used += k
            self._X.append(X[:k].copy())
            self._y.append(y.copy())
        if k < len(X):
            raise BudgetExhausted(f"budget of {self.budget.limit} evaluations used up")
        return y

    def __call__(self, x) -> float:
        return float(self.batch(np.asarray(x, dtype=float)[None, :])[0])

    def samples(self):
        if not self._X:
            return np.empty((0, self.dimension)), np.empty(0)
        return np.vstack(self._X), np.concatenate(self._y)


def evaluate(inst: ProblemInstance, x, budget: EvaluationBudget, trace: Objective | None = None) -> float:
    """Evaluate one point against ``budget``; logs into ``trace`` when given."""
    if trace is not None:
        if trace.budget is not budget:
            raise ValueError("trace is bound to a different budget")
        return trace(x)
    if budget.used >= budget.limit:
        raise BudgetExhausted(f"budget of {budget.limit} evaluations used up")
    budget.used += 1
    return inst(np.asarray(x, dtype=float)[None, :])


def target_precision(inst: ProblemInstance, f_value: float) -> float:
    return max(float(f_value) - inst.f_opt, 0.0)
