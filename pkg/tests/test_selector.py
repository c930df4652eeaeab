import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trajsel.selector import (CAP, ORDER, confusion, constant_selection, counts, gap_closed, loss, select,
                              true_best, vbs_sbs)

precisions = st.one_of(st.floats(0, 1e4, allow_subnormal=False), st.sampled_from([0.0, 1e-9, 1e-8, 1e-3]))
runs = st.dictionaries(st.tuples(st.integers(1, 24), st.integers(1, 5), st.integers(1, 10)),
                       st.fixed_dictionaries({a: precisions for a in ORDER}), min_size=1, max_size=30)


def test_select_argmin_and_tie_order():
    pred = {"r1": {"BFGS": -6, "CMAES": -4, "DE": -1, "MLSL": 0, "PSO": 2},
            "r2": {"BFGS": 1, "CMAES": -3, "DE": -3, "MLSL": 0, "PSO": -2}}
    assert select(pred) == {"r1": "BFGS", "r2": "CMAES"}


def test_subset_never_selects_excluded():
    rng = np.random.default_rng(0)
    pred = {i: {a: rng.normal() - (5 if a == "BFGS" else 0) for a in ORDER} for i in range(50)}
    sub = [a for a in ORDER if a != "BFGS"]
    assert "BFGS" not in set(select(pred, sub).values())


def test_select_rejects_missing_prediction():
    with pytest.raises(ValueError, match="PSO"):
        select({"r": {a: 0.0 for a in ORDER[:4]}})


def test_loss_examples():
    perf = {"a": {"BFGS": 1e-3, "CMAES": 1e-5, "DE": 1, "MLSL": 1, "PSO": 1},
            "b": {"BFGS": 1e-12, "CMAES": 1e-9, "DE": 1, "MLSL": 1, "PSO": 1}}
    recs = {r.run_id: r for r in loss(perf, {"a": "BFGS", "b": "CMAES"})}
    assert recs["a"].loss == pytest.approx(2.0)
    assert recs["b"].loss == 0.0 and recs["b"].best == ("BFGS", "CMAES")
    assert recs["b"].f_a == CAP and recs["b"].f_astar == CAP
    assert loss(perf, {"a": "CMAES"})[0].loss == 0.0


def test_gap_closed_examples():
    assert gap_closed(0.5, 0.0) == 1.0
    assert gap_closed(0.5, 0.5) == 0.0
    assert gap_closed(0.5, 0.7) < 0
    assert gap_closed(0.5, -1.0) == 1.0  # clamped


def test_confusion_examples():
    perf = {1: {"BFGS": 1, "CMAES": 2, "DE": 3, "MLSL": 4, "PSO": 5},
            2: {"BFGS": 5, "CMAES": 1, "DE": 3, "MLSL": 4, "PSO": 5},
            3: {"BFGS": 5, "CMAES": 4, "DE": 1, "MLSL": 4, "PSO": 1}}
    cm = confusion({k: perf[k] for k in (1, 2)}, {1: "BFGS", 2: "CMAES"})
    assert np.array_equal(cm.counts, np.diag([1, 1, 0, 0, 0])) and cm.excluded == 0
    cm = confusion(perf, {1: "BFGS", 2: "CMAES", 3: "CMAES"})
    assert cm.excluded == 1 and cm.counts.sum() == 2 and cm.total == 3
    # one other algorithm tied with the selected best: counted on the diagonal
    cm = confusion({3: perf[3]}, {3: "DE"})
    assert cm.counts[2, 2] == 1 and cm.excluded == 0


def test_counts_examples():
    one = {"r": {"BFGS": 1, "CMAES": 2, "DE": 3, "MLSL": 4, "PSO": 5}}
    ct = counts({100: one}, {100: {"r": "DE"}})
    assert ct.best[:, 0].sum() == 1 and ct.selected[:, 0].sum() == 1
    tie = {"r": {"BFGS": 1, "CMAES": 1, "DE": 3, "MLSL": 4, "PSO": 5}}
    assert counts({100: tie}, {100: {"r": "DE"}}).best[:, 0].sum() == 2


@settings(max_examples=100, deadline=None)
@given(perf=runs, seed=st.integers(0, 1000))
def test_loss_identities_property(perf, seed):
    rng = np.random.default_rng(seed)
    sel = {rid: ORDER[rng.integers(5)] for rid in perf}
    recs = loss(perf, sel)
    assert all(r.loss >= 0 for r in recs)
    for r in recs:
        assert (r.loss == 0) == (r.selected in r.best)
    vbs_sel = {rid: true_best(perf[rid], ORDER)[0][0] for rid in perf}
    assert all(r.loss == 0 for r in loss(perf, vbs_sel))
    b = vbs_sbs(perf, ORDER, vbs_sel)
    assert b.vbs_loss == 0 and (b.gap_closed == 1.0)
    assert vbs_sbs(perf, ORDER, constant_selection(perf, b.sbs)).gap_closed == (0.0 if b.sbs_loss > 0 else 1.0)
    assert all(b.sbs_loss <= np.mean([r.loss for r in loss(perf, constant_selection(perf, a))]) for a in ORDER)


@settings(max_examples=60, deadline=None)
@given(perf=runs, seed=st.integers(0, 1000))
def test_confusion_and_counts_totals_property(perf, seed):
    rng = np.random.default_rng(seed)
    sel = {rid: ORDER[rng.integers(5)] for rid in perf}
    cm = confusion(perf, sel)
    assert cm.counts.sum() + cm.excluded == len(perf)
    ct = counts({100: perf}, {100: sel})
    assert ct.selected[:, 0].sum() == len(perf)
    assert ct.best[:, 0].sum() >= len(perf)


@settings(max_examples=60, deadline=None)
@given(perf=runs, cap=st.sampled_from([1e-8, 1e-6, 1e-3]))
def test_capping_never_creates_negative_losses(perf, cap):
    for a in ORDER:
        assert all(r.loss >= 0 for r in loss(perf, constant_selection(perf, a), cap=cap))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-40, 40), min_size=5, max_size=5), min_size=1, max_size=20))
def test_selection_invariant_under_monotone_transform(rows):
    pred = {i: dict(zip(ORDER, r)) for i, r in enumerate(rows)}
    warped = {i: {a: np.exp(v / 3) * 2 + 1 for a, v in row.items()} for i, row in pred.items()}
    assert select(pred) == select(warped)
