"""Train one model per (algorithm, budget, target type)."""
from multiprocessing import get_context

import numpy as np

from ..portfolio.base import ALGORITHMS, OptimizerKind
from .tree import fit_forest
from .validation import Dataset, HyperGrid, TargetType, _seed, grid_search, transform_target


def model_seed(seed: int, algorithm, budget: int, target_type) -> int:
    a = [k.value for k in ALGORITHMS].index(OptimizerKind(algorithm).value)
    t = [k.value for k in TargetType].index(TargetType(target_type).value)
    return _seed(seed, a, budget, t)


def _train_one(args):
    key, X, precision, groups, inner, grid, seed, n_groups, schema_version = args
    alg, budget, tt = key
    y = transform_target(precision, tt)
    ds = Dataset(X, y, TargetType(tt), groups, inner)
    s = model_seed(seed, alg, budget, tt)
    chosen, report = grid_search(ds, grid, s, n_groups=n_groups, key=key)
    model = fit_forest(X, y, chosen, _seed(s, 99_999), schema_version=schema_version)
    return key, report, model


def train_all(X, groups, inner_groups, performance: dict, grid: HyperGrid, seed: int,
              algorithms=ALGORITHMS, budgets=(100, 200, 300, 500, 700, 900),
              n_groups: int = 5, jobs: int = 1, schema_version: str = ""):
    """Returns {(algorithm, budget, target_type): (CvReport, RandomForest)}.

    ``performance[(algorithm, budget)]`` holds the achieved precision per row.
    """
    X = np.asarray(X, dtype=float)
    gaps = []
    for alg in algorithms:
        for b in budgets:
            p = performance.get((OptimizerKind(alg).value, int(b)))
            if p is None:
                gaps.append(f"{alg}@{b}: missing")
            elif len(p) != len(X) or np.any(~np.isfinite(p)):
                gaps.append(f"{alg}@{b}: {int(np.sum(~np.isfinite(p)))} missing runs")
    if gaps:
        raise ValueError("incomplete performance data: " + "; ".join(gaps))
    tasks = []
    for alg in algorithms:
        for b in budgets:
            for tt in TargetType:
                key = (OptimizerKind(alg).value, int(b), tt.value)
                tasks.append((key, X, np.asarray(performance[(key[0], key[1])]), groups,
                              inner_groups, grid, seed, n_groups, schema_version))
    if jobs > 1:
        with get_context("fork").Pool(jobs) as pool:
            results = pool.map(_train_one, tasks, chunksize=1)
    else:
        results = [_train_one(t) for t in tasks]
    return {key: (report, model) for key, report, model in results}
