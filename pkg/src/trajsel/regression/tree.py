"""CART regression trees and random forests."""
import heapq
from dataclasses import dataclass, asdict
from enum import Enum
from typing import Optional

import numpy as np


class Criterion(str, Enum):
    SQUARED_ERROR = "squared_error"
    ABSOLUTE_ERROR = "absolute_error"
    POISSON = "poisson"


class MaxFeatures(str, Enum):
    ALL = "all"
    SQRT = "sqrt"
    LOG2 = "log2"


UNBOUNDED = None
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class Hyper:
    n_estimators: int = 100
    max_features: MaxFeatures = MaxFeatures.ALL
    max_depth: Optional[int] = UNBOUNDED
    min_samples_split: int = 2
    criterion: Criterion = Criterion.SQUARED_ERROR

    def __post_init__(self):
        object.__setattr__(self, "max_features", MaxFeatures(self.max_features))
        object.__setattr__(self, "criterion", Criterion(self.criterion))
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1 or unbounded")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["max_features"] = self.max_features.value
        d["criterion"] = self.criterion.value
        return d


def n_split_features(mf: MaxFeatures, p: int) -> int:
    if mf == MaxFeatures.ALL:
        return p
    if mf == MaxFeatures.SQRT:
        return max(1, int(np.ceil(np.sqrt(p))))
    return max(1, int(np.ceil(np.log2(p)))) if p > 1 else 1


# ------------------------------------------------------------ split costs

def _xlogx(v):
    return np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)


def _prefix_abs_dev(y):
    """out[k] = sum_{i<=k} |y_i - median(y_0..y_k)| via two heaps."""
    low, high = [], []          # max-heap (negated) and min-heap
    s_low = s_high = 0.0
    out = np.empty(len(y))
    for k, v in enumerate(y):
        if not low or v <= -low[0]:
            heapq.heappush(low, -v)
            s_low += v
        else:
            heapq.heappush(high, v)
            s_high += v
        if len(low) > len(high) + 1:
            t = -heapq.heappop(low)
            s_low -= t
            heapq.heappush(high, t)
            s_high += t
        elif len(high) > len(low):
            t = heapq.heappop(high)
            s_high -= t
            heapq.heappush(low, -t)
            s_low += t
        m = -low[0]
        out[k] = (m * len(low) - s_low) + (s_high - m * len(high))
    return out


def split_costs(ys: np.ndarray, criterion: Criterion) -> np.ndarray:
    """Cost of every split of the columns of ``ys`` (rows sorted by the feature).

    Row ``i`` of the result is the summed child impurity when the left child
    takes rows ``0..i``. Impurities are totals, not means: squared error is the
    sum of squared deviations, absolute error the summed deviation from the
    median, Poisson the summed half deviance.
    """
    n = ys.shape[0]
    nl = np.arange(1, n)[:, None].astype(float)
    nr = n - nl
    if criterion == Criterion.SQUARED_ERROR:
        yc = ys - ys.mean(axis=0)
        c1 = np.cumsum(yc, axis=0)
        c2 = np.cumsum(yc * yc, axis=0)
        t1, t2 = c1[-1], c2[-1]
        left = c2[:-1] - c1[:-1] ** 2 / nl
        right = (t2 - c2[:-1]) - (t1 - c1[:-1]) ** 2 / nr
        return np.maximum(left, 0.0) + np.maximum(right, 0.0)
    if criterion == Criterion.POISSON:
        s = np.cumsum(ys, axis=0)
        xl = np.cumsum(_xlogx(ys), axis=0)
        sl, sr = s[:-1], s[-1] - s[:-1]
        xll, xlr = xl[:-1], xl[-1] - xl[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            cost = np.maximum(xll - sl * np.log(sl / nl), 0.0) + np.maximum(xlr - sr * np.log(sr / nr), 0.0)
        # children with a non-positive total have no valid Poisson mean
        return np.where((sl > 0) & (sr > 0), cost, np.inf)
    cols = []
    for j in range(ys.shape[1]):
        col = ys[:, j]
        left = _prefix_abs_dev(col)[:-1]
        right = _prefix_abs_dev(col[::-1])[::-1][1:]
        cols.append(left + right)
    return np.column_stack(cols)


def best_split(X: np.ndarray, y: np.ndarray, features, criterion: Criterion):
    """Best (feature, threshold, cost) over ``features``; None if nothing splits.

    Ties go to the earliest feature in ``features``, then the lowest threshold.
    """
    feats = np.asarray(features)
    Xs = X[:, feats]
    order = np.argsort(Xs, axis=0, kind="stable")
    xs = np.take_along_axis(Xs, order, axis=0)
    ys = y[order]
    costs = split_costs(ys, criterion)
    costs = np.where(xs[1:] > xs[:-1], costs, np.inf)
    flat = costs.T.ravel()
    finite = np.isfinite(flat)
    if not finite.any():
        return None
    # costs reached through different sums can differ in the last bits; treat
    # anything within TIE_RTOL of the best (relative to the cost scale) as a tie
    lo_cost = flat[finite].min()
    tol = TIE_RTOL * np.abs(flat[finite]).max()
    k = int(np.argmax(finite & (flat <= lo_cost + tol)))
    j, i = divmod(k, costs.shape[0])
    lo, hi = xs[i, j], xs[i + 1, j]
    thr = lo + (hi - lo) / 2.0
    if thr >= hi:
        thr = lo
    return int(feats[j]), float(thr), float(flat[k])


# ------------------------------------------------------------------ trees

class RegressionTree:
    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=float)

    @property
    def n_nodes(self) -> int:
        return len(self.value)

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=int)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            f = self.feature[node]
            inner = f >= 0
            if not inner.any():
                return self.value[node]
            go_left = X[rows, np.where(inner, f, 0)] <= self.threshold[node]
            node = np.where(inner, np.where(go_left, self.left[node], self.right[node]), node)


def fit_tree(X, y, hyper: Hyper, seed=None, rng=None) -> RegressionTree:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if n < 1:
        raise ValueError("no rows to fit")
    if hyper.criterion == Criterion.POISSON and np.any(y < 0):
        raise ValueError("Poisson criterion needs non-negative targets")
    if rng is None:
        rng = np.random.default_rng(seed)
    k = n_split_features(hyper.max_features, p)
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(idx):
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        value.append(float(np.mean(y[idx])))
        return len(value) - 1

    stack = [(new_node(np.arange(n)), np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        if hyper.max_depth is not None and depth >= hyper.max_depth:
            continue
        if len(idx) < hyper.min_samples_split:
            continue
        yi = y[idx]
        if np.all(yi == yi[0]):
            continue
        feats = np.arange(p) if k == p else np.sort(rng.choice(p, k, replace=False))
        found = best_split(X[idx], yi, feats, hyper.criterion)
        if found is None:
            continue
        f, thr, _ = found
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        feature[node], threshold[node] = f, thr
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # right first so the left subtree is numbered first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))
    return RegressionTree(feature, threshold, left, right, value)


class RandomForest:
    """Mean of bagged CART trees."""

    def __init__(self, trees, hyper: Hyper, seed: int, schema_version: str = ""):
        self.trees = trees
        self.hyper = hyper
        self.seed = seed
        self.schema_version = schema_version

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.mean([t.predict(X) for t in self.trees], axis=0)


def fit_forest(X, y, hyper: Hyper, seed: int, bootstrap: bool = True,
               schema_version: str = "") -> RandomForest:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    trees = []
    for t in range(hyper.n_estimators):
        rng = np.random.default_rng([int(seed), t])
        idx = rng.integers(0, n, n) if bootstrap else np.arange(n)
        trees.append(fit_tree(X[idx], y[idx], hyper, rng=rng))
    return RandomForest(trees, hyper, int(seed), schema_version)
