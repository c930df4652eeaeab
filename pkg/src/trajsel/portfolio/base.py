"""Types shared by all optimizers: algorithm ids, warm-start specs, traces."""
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np


class OptimizerKind(str, Enum):
    BFGS = "BFGS"
    CMAES = "CMAES"
    DE = "DE"
    MLSL = "MLSL"
    PSO = "PSO"

    def __str__(self):
        return self.value


# fixed order used for tie-breaking and table layout
ALGORITHMS = tuple(OptimizerKind)


@dataclass(frozen=True)
class WarmStartSpec:
    kind: OptimizerKind
    initial_center: np.ndarray
    initial_population: Optional[np.ndarray] = None
    inverse_hessian: Optional[np.ndarray] = None

    def __post_init__(self):
        if (self.inverse_hessian is not None) != (self.kind == OptimizerKind.BFGS):
            raise ValueError("inverse_hessian is required for BFGS and only for BFGS")


@dataclass
class RunTrace:
    """Ordered evaluations of one run plus identifying metadata."""
    meta: dict
    X: np.ndarray
    y: np.ndarray
    final_state: Any = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.y)

    @property
    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate(self.y) if len(self.y) else self.y

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.y))

    def to_record(self) -> dict:
        rec = dict(self.meta)
        rec["samples"] = [[x, y] for x, y in zip(self.X.tolist(), self.y.tolist())]
        rec["best_so_far"] = self.best_so_far.tolist()
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))

    @classmethod
    def from_record(cls, rec: dict) -> "RunTrace":
        rec = dict(rec)
        samples = rec.pop("samples")
        rec.pop("best_so_far", None)
        X = np.array([s[0] for s in samples], dtype=float)
        y = np.array([s[1] for s in samples], dtype=float)
        return cls(rec, X.reshape(len(y), -1), y)

    @classmethod
    def from_json(cls, line: str) -> "RunTrace":
        return cls.from_record(json.loads(line))
