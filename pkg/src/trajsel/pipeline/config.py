"""Protocol configuration: flat ``key = value`` files plus CLI overrides."""
from dataclasses import dataclass, field, fields, replace
from math import ceil
from pathlib import Path

import numpy as np

from ..portfolio.base import ALGORITHMS, OptimizerKind
from ..portfolio.cmaes import cma_default_population_size
from ..regression.tree import Criterion, MaxFeatures
from ..regression.validation import HyperGrid

ORDER = tuple(a.value for a in ALGORITHMS)


@dataclass(frozen=True)
class ProtocolConfig:
    dimension: int = 5
    functions: tuple = tuple(range(1, 25))
    instances: tuple = (1, 2, 3, 4, 5)
    repetitions: int = 10
    portfolio: tuple = ORDER
    a1_multiplier: int = 30
    feature_budget: int = 150
    a2_budgets: tuple = (100, 200, 300, 500, 700, 900)
    seed: int = 1
    jobs: int = 1
    out: str = "results"
    exclude: tuple = ()
    n_estimators: tuple = (100, 500, 1000)
    max_features: tuple = ("all", "sqrt", "log2")
    max_depth: tuple = (4, 8, 15, None)
    min_samples_split: tuple = (2, 5, 10)
    criterion: tuple = ("squared_error", "absolute_error", "poisson")

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")
        if not self.a2_budgets or any(b <= 0 for b in self.a2_budgets):
            raise ValueError("A2 budgets must be positive")
        if list(self.a2_budgets) != sorted(self.a2_budgets):
            raise ValueError("A2 budgets must be sorted")
        if self.feature_budget > self.a1_budget:
            raise ValueError(f"feature budget {self.feature_budget} exceeds A1 budget {self.a1_budget}")
        for a in self.portfolio + self.exclude:
            OptimizerKind(a)
        if self.repetitions < 1 or self.jobs < 1:
            raise ValueError("repetitions and jobs must be positive")

    @property
    def population_size(self) -> int:
        return cma_default_population_size(self.dimension)

    @property
    def a1_budget(self) -> int:
        lam = self.population_size
        return int(ceil(self.a1_multiplier * self.dimension / lam) * lam)

    @property
    def max_budget(self) -> int:
        return int(self.a2_budgets[-1])

    @property
    def algorithms(self) -> tuple:
        return tuple(a for a in ORDER if a in self.portfolio)

    @property
    def grid(self) -> HyperGrid:
        return HyperGrid(tuple(self.n_estimators), tuple(MaxFeatures(m) for m in self.max_features),
                         tuple(self.max_depth), tuple(self.min_samples_split),
                         tuple(Criterion(c) for c in self.criterion))

    def triples(self) -> list[tuple]:
        return [(f, i, r) for f in self.functions for i in self.instances
                for r in range(1, self.repetitions + 1)]

    def run_keys(self) -> list["RunKey"]:
        return [RunKey(f, i, r, a) for f, i, r in self.triples() for a in self.algorithms]

    def model_keys(self) -> list[tuple]:
        return [(a, b, t) for a in self.algorithms for b in self.a2_budgets for t in ("RAW", "LOG10")]

    def with_overrides(self, **kw) -> "ProtocolConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **{k: parse_value(k, v) if isinstance(v, str) else v for k, v in kw.items()})

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join("unbounded" if x is None else str(x) for x in v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, order=True)
class RunKey:
    function: int
    instance: int
    repetition: int
    algorithm: str = field(compare=False)

    def seeds(self, master: int) -> tuple[int, int]:
        """(run seed, warm-start seed) hashed from the master seed and the key."""
        return derive_seeds(master, self.function, self.instance, self.repetition,
                            1 + ORDER.index(self.algorithm))


def derive_seeds(master: int, function: int, instance: int, repetition: int, code: int):
    """Code 0 is the A1 run of the triple, 1..5 the second-phase algorithms."""
    s = np.random.SeedSequence([int(master), int(function), int(instance), int(repetition), int(code)])
    a, b = s.generate_state(2)
    return int(a), int(b)


_INT_LISTS = {"functions", "instances", "a2_budgets", "n_estimators", "min_samples_split"}
_STR_LISTS = {"portfolio", "exclude", "max_features", "criterion"}
_INTS = {"dimension", "repetitions", "a1_multiplier", "feature_budget", "seed", "jobs"}


def _int_list(text: str) -> tuple:
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def parse_value(key: str, text: str):
    text = text.strip()
    if key in _INTS:
        return int(text)
    if key in _INT_LISTS:
        return _int_list(text)
    if key in _STR_LISTS:
        vals = tuple(p.strip() for p in text.split(",") if p.strip())
        if key in ("portfolio", "exclude"):
            vals = tuple(OptimizerKind(v.upper()).value for v in vals)
        return vals
    if key == "max_depth":
        return tuple(None if p.strip().lower() in ("none", "unbounded") else int(p)
                     for p in text.split(",") if p.strip())
    if key == "out":
        return text
    raise KeyError(f"unknown configuration key {key!r}")


CONFIG_KEYS = [f.name for f in fields(ProtocolConfig)]


def load_config(path: str | Path | None = None, **overrides) -> ProtocolConfig:
    values = {}
    if path is not None:
        for n, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.replace("-", "_")
            if k not in CONFIG_KEYS:
                raise ValueError(f"{path}:{n}: unknown key {k!r}")
            values[k] = parse_value(k, v)
    cfg = ProtocolConfig(**values)
    return cfg.with_overrides(**overrides)


DESK = dict(functions=(1, 2, 3, 8, 15, 21), instances=(1, 2), repetitions=3,
            n_estimators=(100,), max_features=("all",), max_depth=(8, None),
            min_samples_split=(2,), criterion=("squared_error",))


def desk_config(**kw) -> ProtocolConfig:
    return ProtocolConfig(**{**DESK, **kw})
