"""Grouped cross-validation, R^2 and grid search for random forests."""
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import product

import numpy as np

from .tree import UNBOUNDED, Criterion, Hyper, MaxFeatures, fit_forest

LOG_FLOOR = 1e-8


class TargetType(str, Enum):
    RAW = "RAW"
    LOG10 = "LOG10"

    def __str__(self):
        return self.value


def transform_target(precision, target_type: TargetType) -> np.ndarray:
    p = np.asarray(precision, dtype=float)
    if TargetType(target_type) == TargetType.LOG10:
        return np.log10(np.maximum(p, LOG_FLOOR))
    return p.copy()


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    target_type: TargetType
    groups: np.ndarray              # instance id per row; defines the outer folds
    inner_groups: np.ndarray = None # fallback grouping when a training fold has one instance
    meta: list = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.groups = np.asarray(self.groups)
        if self.inner_groups is None:
            self.inner_groups = np.arange(len(self.y))
        self.inner_groups = np.asarray(self.inner_groups)
        n = len(self.y)
        if not (len(self.X) == len(self.groups) == len(self.inner_groups) == n):
            raise ValueError("rows of features, targets and groups do not align")


@dataclass(frozen=True)
class HyperGrid:
    n_estimators: tuple = (100, 500, 1000)
    max_features: tuple = (MaxFeatures.ALL, MaxFeatures.SQRT, MaxFeatures.LOG2)
    max_depth: tuple = (4, 8, 15, UNBOUNDED)
    min_samples_split: tuple = (2, 5, 10)
    criterion: tuple = (Criterion.SQUARED_ERROR, Criterion.ABSOLUTE_ERROR, Criterion.POISSON)

    def points(self) -> list[Hyper]:
        return [Hyper(*combo) for combo in product(self.n_estimators, self.max_features,
                                                   self.max_depth, self.min_samples_split,
                                                   self.criterion)]

    def valid_points(self, y) -> tuple[list[Hyper], bool]:
        """Points usable for targets ``y``; Poisson is dropped when any target is negative."""
        pts = self.points()
        if np.any(np.asarray(y) < 0):
            kept = [h for h in pts if h.criterion != Criterion.POISSON]
            return kept, len(kept) < len(pts)
        return pts, False


@dataclass
class CvReport:
    key: tuple
    fold_groups: list
    fold_r2: list
    fold_flags: list
    fold_hyper: list
    chosen: Hyper
    poisson_pruned: bool = False
    oof_predictions: np.ndarray = None

    @property
    def mean_r2(self) -> float:
        return float(np.mean(self.fold_r2))


def logo_folds(groups, n_groups: int = 5):
    """One fold per distinct group label, in sorted label order."""
    groups = np.asarray(groups)
    labels = np.unique(groups)
    if len(labels) != n_groups:
        raise ValueError(f"expected {n_groups} distinct groups, found {len(labels)}: {labels.tolist()}")
    folds = []
    for g in labels:
        test = np.flatnonzero(groups == g)
        train = np.flatnonzero(groups != g)
        folds.append((train, test))
    return folds


def group_kfold(groups, k: int):
    """Deterministic group k-fold: sorted labels dealt round-robin to k folds."""
    groups = np.asarray(groups)
    labels = np.unique(groups)
    k = min(k, len(labels))
    if k < 2:
        raise ValueError("need at least two groups for grouped CV")
    assign = {g: i % k for i, g in enumerate(labels)}
    fold_of = np.array([assign[g] for g in groups])
    return [(np.flatnonzero(fold_of != i), np.flatnonzero(fold_of == i)) for i in range(k)]


def r2_flagged(pred, truth) -> tuple[float, bool]:
    """(R^2, undefined). Constant truths give (0.0, True)."""
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if len(pred) != len(truth) or len(truth) == 0:
        raise ValueError("predictions and truths must have equal nonzero length")
    ss_tot = np.sum((truth - truth.mean()) ** 2)
    if ss_tot == 0:
        return 0.0, True
    ss_res = np.sum((truth - pred) ** 2)
    return float(1.0 - ss_res / ss_tot), False


def r2(pred, truth) -> float:
    return r2_flagged(pred, truth)[0]


def _seed(base: int, *parts: int) -> int:
    return int(np.random.SeedSequence([int(base), *map(int, parts)]).generate_state(1)[0])


def _inner_score(ds: Dataset, rows, hyper: Hyper, seed: int, inner_k: int) -> float:
    g = ds.groups[rows]
    labels = g if len(np.unique(g)) >= 2 else ds.inner_groups[rows]
    scores = []
    for j, (tr, te) in enumerate(group_kfold(labels, inner_k)):
        model = fit_forest(ds.X[rows[tr]], ds.y[rows[tr]], hyper, _seed(seed, j))
        scores.append(r2(model.predict(ds.X[rows[te]]), ds.y[rows[te]]))
    return float(np.mean(scores))


def grid_search(ds: Dataset, grid: HyperGrid, seed: int, n_groups: int = 5,
                inner_k: int = 4, key: tuple = ()) -> tuple[Hyper, CvReport]:
    """Outer leave-one-group-out evaluation with inner grouped CV for model choice.

    Inner CV groups by instance; a training fold holding a single instance is
    grouped by the fallback labels instead. The returned hyperparameters are
    the ones chosen most often across outer folds (earliest in grid order on ties).
    """
    points, pruned = grid.valid_points(ds.y)
    if not points:
        raise ValueError("no valid grid point for these targets")
    oof = np.full(len(ds.y), np.nan)
    fold_groups, fold_r2, fold_flags, fold_hyper = [], [], [], []
    for fi, (train, test) in enumerate(logo_folds(ds.groups, n_groups)):
        if len(points) == 1:
            best = points[0]
        else:
            scores = [_inner_score(ds, train, h, _seed(seed, fi, pi), inner_k)
                      for pi, h in enumerate(points)]
            best = points[int(np.argmax(scores))]
        model = fit_forest(ds.X[train], ds.y[train], best, _seed(seed, fi, 10_000))
        oof[test] = model.predict(ds.X[test])
        score, flag = r2_flagged(oof[test], ds.y[test])
        fold_groups.append(ds.groups[test[0]].item())
        fold_r2.append(score)
        fold_flags.append(flag)
        fold_hyper.append(best)
    counts = Counter(fold_hyper)
    top = max(counts.values())
    chosen = next(h for h in points if counts.get(h, 0) == top)
    report = CvReport(key, fold_groups, fold_r2, fold_flags, fold_hyper, chosen, pruned, oof)
    return chosen, report
