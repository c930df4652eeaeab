import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trajsel.bbob import EvaluationBudget, instantiate
from trajsel.portfolio import ALGORITHMS, OptimizerKind, RunTrace, run
from trajsel.portfolio.cmaes import CmaState
from trajsel.warmstart import SwitchState, capture, nearest_spd, warm_start


def a1_run(fid=3, iid=1, seed=0, budget=152):
    inst = instantiate((fid, iid, 5))
    tr = run("CMAES", inst, EvaluationBudget(budget), seed)
    return inst, tr, capture(tr, tr.final_state, "ref")


def test_capture_argmin_and_copies_state():
    _, tr, s = a1_run()
    k = int(np.argmin(tr.y))
    assert np.array_equal(s.best_x, tr.X[k]) and s.best_f == tr.y.min()
    assert np.array_equal(s.cma_C, tr.final_state.C) and s.cma_sigma == tr.final_state.sigma
    assert np.array_equal(s.cma_mean, tr.final_state.mean)
    assert s.phase_boundary == 152 and s.a1_trace_ref == "ref"
    again = capture(tr, tr.final_state, "ref")
    assert again.to_record() == s.to_record()


def test_capture_rejects_empty_trace():
    empty = RunTrace({}, np.empty((0, 5)), np.empty(0))
    with pytest.raises(ValueError):
        capture(empty, CmaState.initial(np.zeros(5)))


def state(C, sigma=2.0, d=5):
    return SwitchState(np.full(d, 0.5), 1.0, np.zeros(d), sigma, C, "", 0)


def test_bfgs_identity_scaling():
    spec = warm_start("BFGS", state(np.eye(5), 2.0), 0)
    assert np.array_equal(spec.inverse_hessian, 4 * np.eye(5))
    assert np.array_equal(spec.initial_center, np.full(5, 0.5))


def test_cmaes_contract():
    spec = warm_start("CMAES", state(np.eye(5)), 0)
    assert np.array_equal(spec.initial_center, np.full(5, 0.5))
    assert spec.inverse_hessian is None and spec.initial_population is None


@pytest.mark.parametrize("kind", ["DE", "PSO"])
def test_population_deterministic_and_in_domain(kind):
    s = state(np.eye(5), sigma=8.0)
    a, b = warm_start(kind, s, 42), warm_start(kind, s, 42)
    assert np.array_equal(a.initial_population, b.initial_population)
    assert np.abs(a.initial_population).max() <= 5
    assert len(a.initial_population) == (15 if kind == "DE" else 40)


def test_non_spd_covariance_is_floored():
    C = np.diag([1.0, -1e-3, 2.0, 1.0, 1.0])
    H = warm_start("BFGS", state(C, 1.0), 0).inverse_hessian
    ev = np.linalg.eigvalsh(H)
    assert np.allclose(H, H.T) and ev.min() >= 1e-12 * (1 - 1e-9)


def test_bfgs_inverse_hessian_on_captured_states():
    for k in range(20):
        _, _, s = a1_run(fid=1 + k, iid=1 + k % 5, seed=k)
        H = warm_start("BFGS", s, k).inverse_hessian
        np.testing.assert_allclose(H, s.cma_sigma ** 2 * s.cma_C, rtol=0, atol=1e-12)


@pytest.mark.parametrize("kind", ALGORITHMS)
def test_concatenated_curve_nonincreasing(kind):
    inst, tr, s = a1_run(fid=21, iid=2, seed=7)
    a2 = run(kind, inst, EvaluationBudget(200), 9, warm_start(kind, s, 9))
    y = np.concatenate([tr.y, a2.y])
    bsf = np.minimum.accumulate(y)
    assert np.all(np.diff(bsf) <= 0)
    assert bsf[len(tr)] <= s.best_f


def test_record_roundtrip():
    _, _, s = a1_run()
    back = SwitchState.from_record(s.to_record(), "ref", 152)
    assert back.to_record() == s.to_record()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=9, max_size=9))
def test_nearest_spd_property(vals):
    M = np.array(vals).reshape(3, 3)
    S = nearest_spd(M)
    assert np.allclose(S, S.T)
    assert np.linalg.eigvalsh(S).min() > 0
