import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trajsel.regression import (UNBOUNDED, Criterion, Hyper, MaxFeatures, best_split, fit_forest,
                                fit_tree, n_split_features, r2)


def impurity(y, criterion):
    """Direct child impurity (totals), written independently of the fast path."""
    if criterion == Criterion.SQUARED_ERROR:
        return float(np.sum((y - y.mean()) ** 2))
    if criterion == Criterion.ABSOLUTE_ERROR:
        return float(np.sum(np.abs(y - np.median(y))))
    mu = y.mean()
    if mu <= 0:
        return np.inf
    pos = y > 0
    return float(np.sum(y[pos] * np.log(y[pos] / mu)) - np.sum(y - mu))


def brute_force_root(X, y, criterion):
    """All (feature, threshold) candidates with their costs, in tie-break order."""
    cands = []
    for f in range(X.shape[1]):
        vals = np.unique(X[:, f])
        for lo, hi in zip(vals[:-1], vals[1:]):
            thr = lo + (hi - lo) / 2
            left = X[:, f] <= thr
            cost = impurity(y[left], criterion) + impurity(y[~left], criterion)
            cands.append((cost, f, thr))
    return cands


def random_dataset(rng):
    n = int(rng.integers(2, 21))
    p = int(rng.integers(1, 4))
    X = rng.integers(0, 6, size=(n, p)).astype(float) if rng.random() < 0.4 else rng.normal(size=(n, p))
    if rng.random() < 0.3:
        y = rng.integers(0, 4, size=n).astype(float)  # many exact ties in the targets
    else:
        y = rng.gamma(2.0, 1.5, size=n)
    return X, y


def root_mismatch(X, y, criterion):
    tree = fit_tree(X, y, Hyper(max_depth=1, criterion=criterion))
    cands = brute_force_root(X, y, criterion)
    finite = [c for c in cands if np.isfinite(c[0])]
    if not finite or np.all(y == y[0]):
        return tree.feature[0] != -1
    best = min(c[0] for c in finite)
    tol = 1e-9 * max(abs(c[0]) for c in finite)
    expected = next(c for c in finite if c[0] <= best + tol)
    return (int(tree.feature[0]), float(tree.threshold[0])) != (expected[1], expected[2])


@pytest.mark.parametrize("criterion", list(Criterion))
def test_root_split_matches_brute_force(criterion):
    rng = np.random.default_rng(2024)
    mismatches = sum(root_mismatch(*random_dataset(rng), criterion) for _ in range(100))
    assert mismatches == 0


@settings(max_examples=100, deadline=None)
@given(data=st.data(), criterion=st.sampled_from(list(Criterion)))
def test_root_split_property(data, criterion):
    n = data.draw(st.integers(2, 20))
    p = data.draw(st.integers(1, 3))
    X = np.array(data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=p, max_size=p),
                                    min_size=n, max_size=n)), dtype=float)
    y = np.array(data.draw(st.lists(st.floats(0, 50, allow_nan=False, allow_subnormal=False), min_size=n, max_size=n)))
    assert not root_mismatch(X, y, criterion)


def test_staircase_example():
    X = np.arange(4.0)[:, None]
    t = fit_tree(X, X[:, 0], Hyper(max_depth=1))
    assert 1 < t.threshold[0] < 2
    np.testing.assert_allclose(t.predict([[0], [3]]), [0.5, 2.5])


def test_constant_targets_give_single_leaf():
    t = fit_tree(np.random.default_rng(0).normal(size=(10, 2)), np.full(10, 4.0), Hyper())
    assert t.n_nodes == 1 and t.predict([[0, 0]])[0] == 4.0


def test_hyper_validation():
    for bad in ({"max_depth": 0}, {"min_samples_split": 1}, {"n_estimators": 0}, {"criterion": "gini"}):
        with pytest.raises(ValueError):
            Hyper(**bad)
    with pytest.raises(ValueError):
        fit_tree(np.zeros((3, 1)), np.array([-1.0, 0, 1]), Hyper(criterion=Criterion.POISSON))


@pytest.mark.parametrize("mf, p, k", [(MaxFeatures.ALL, 45, 45), (MaxFeatures.SQRT, 45, 7),
                                      (MaxFeatures.LOG2, 45, 6), (MaxFeatures.LOG2, 1, 1),
                                      (MaxFeatures.SQRT, 2, 2)])
def test_split_feature_counts(mf, p, k):
    assert n_split_features(mf, p) == k


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), depth=st.sampled_from([1, 2, 3, UNBOUNDED]),
       mss=st.sampled_from([2, 5, 10]))
def test_tree_structure_limits(seed, depth, mss):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(40, 3))
    y = X[:, 0] * X[:, 1] + rng.normal(size=40)
    t = fit_tree(X, y, Hyper(max_depth=depth, min_samples_split=mss), seed=seed)
    if depth is not UNBOUNDED:
        assert t.depth <= depth
    # every leaf value is the mean of the training rows routed to it
    leaves = np.zeros(len(X), dtype=int)
    for i, x in enumerate(X):
        node = 0
        while t.feature[node] >= 0:
            node = t.left[node] if x[t.feature[node]] <= t.threshold[node] else t.right[node]
        leaves[i] = node
    for leaf in np.unique(leaves):
        assert t.value[leaf] == pytest.approx(y[leaves == leaf].mean())
        if depth is UNBOUNDED and len(set(y[leaves == leaf])) > 1:
            assert (leaves == leaf).sum() < mss or len(np.unique(X[leaves == leaf], axis=0)) == 1


def test_single_tree_forest_without_bootstrap_equals_tree():
    rng = np.random.default_rng(1)
    X, y = rng.normal(size=(30, 3)), rng.normal(size=30)
    h = Hyper(n_estimators=1, max_depth=1)
    f = fit_forest(X, y, h, seed=5, bootstrap=False)
    t = fit_tree(X, y, h)
    probe = rng.normal(size=(20, 3))
    np.testing.assert_array_equal(f.predict(probe), t.predict(probe))


def test_forest_determinism():
    rng = np.random.default_rng(2)
    X, y = rng.normal(size=(40, 4)), rng.normal(size=40)
    h = Hyper(n_estimators=20, max_features=MaxFeatures.SQRT)
    probe = rng.normal(size=(10, 4))
    a = fit_forest(X, y, h, seed=9).predict(probe)
    assert np.array_equal(a, fit_forest(X, y, h, seed=9).predict(probe))
    assert not np.array_equal(a, fit_forest(X, y, h, seed=10).predict(probe))


def test_forest_fits_smooth_target():
    rng = np.random.default_rng(3)
    X = rng.uniform(-2, 2, size=(80, 2))
    y = np.sin(X[:, 0]) + X[:, 1] ** 2
    model = fit_forest(X, y, Hyper(n_estimators=1000), seed=1)
    assert r2(model.predict(X), y) > 0.95


def test_ensemble_variance_shrinks_with_more_trees():
    rng = np.random.default_rng(4)
    X = rng.uniform(-2, 2, size=(25, 2))
    y = X[:, 0] * X[:, 1] + 0.3 * rng.normal(size=25)
    probe = rng.uniform(-2, 2, size=(15, 2))
    spread = {}
    for n in (100, 1000):
        preds = np.array([fit_forest(X, y, Hyper(n_estimators=n, max_depth=4), seed=s).predict(probe)
                          for s in range(10)])
        spread[n] = preds.var(axis=0).mean()
    assert spread[1000] < spread[100]
