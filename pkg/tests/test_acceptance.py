"""The ten acceptance criteria, each reported as one PASS/FAIL line."""
import csv
import filecmp

import numpy as np
import pytest

from trajsel.bbob import instantiate
from trajsel.features import SampleSet, compute_features
from trajsel.pipeline import ProtocolConfig, collect, desk_config, fixed_budget_performance, read_archive
from trajsel.pipeline.config import ORDER
from trajsel.regression import Criterion
from trajsel.selector import constant_selection, loss, true_best, vbs_sbs
from trajsel.warmstart import SwitchState, warm_start

from conftest import load_ela_reference, load_probe_rows
from test_tree import random_dataset, root_mismatch


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def performance_table(out, budget):
    perf = {}
    for r in read_csv(out / "performance.csv"):
        t = (int(r["function"]), int(r["instance"]), int(r["repetition"]))
        perf.setdefault(t, {})[r["algorithm"]] = float(r[f"p{budget}"])
    return perf


def test_criterion_1_protocol_arithmetic(desk_out, verdict):
    out, seconds = desk_out
    full = ProtocolConfig()
    desk = desk_config()
    n_runs = len(read_archive(out / "archive.jsonl"))
    n_models = len(list((out / "models").glob("*.pkl")))
    ok = (len(full.run_keys()) == 6000 and len(full.model_keys()) == 60
          and len(desk.run_keys()) == 180 and n_runs == 180 and n_models == 60 and seconds < 1800)
    verdict(1, ok, f"default {len(full.run_keys())} A2 runs / {len(full.model_keys())} models; "
                   f"desk archive {n_runs} runs, {n_models} models, all stages in {seconds:.0f}s")
    assert ok


def test_criterion_2_bfgs_dominates_unimodal(tmp_path, verdict):
    cfg = ProtocolConfig(functions=(1, 2), instances=(1, 2, 3, 4, 5), repetitions=2,
                         a2_budgets=(100,), out=str(tmp_path))
    collect(cfg)
    perf = fixed_budget_performance(read_archive(tmp_path / "archive.jsonl"), 100)
    details, ok = [], True
    for f in (1, 2):
        rows = [row for t, row in perf.items() if t[0] == f]
        assert len(rows) == 10
        means = {a: float(np.mean([np.log10(max(r[a], 1e-8)) for r in rows])) for a in ORDER}
        others = min(v for a, v in means.items() if a != "BFGS")
        ok &= means["BFGS"] < others
        details.append(f"f{f}: BFGS {means['BFGS']:.2f} vs best other {others:.2f}")
    verdict(2, ok, "; ".join(details) + " (mean log10 precision, 10 runs, capped at 1e-8)")
    assert ok


def test_criterion_3_log_models_beat_raw(desk_out, verdict):
    out, _ = desk_out
    means = {}
    for tt in ("raw", "log10"):
        rows = read_csv(out / f"r2_{tt}.csv")
        means[tt] = {r["algorithm"]: float(np.mean([float(v) for k, v in r.items() if k != "algorithm"]))
                     for r in rows}
    wins = [a for a in ORDER if means["log10"][a] > means["raw"][a]]
    ok = len(wins) >= 4
    verdict(3, ok, f"LOG10 > RAW for {len(wins)}/5 algorithms; "
                   + ", ".join(f"{a} {means['log10'][a]:.2f}/{means['raw'][a]:.2f}" for a in ORDER))
    assert ok


def test_criterion_4_selector_without_bfgs(desk_out, verdict):
    out, _ = desk_out
    budget = max(desk_config().a2_budgets)
    row = next(r for r in read_csv(out / "baselines.csv")
               if r["portfolio"] == "no-BFGS" and int(r["budget"]) == budget)
    ratio = float(row["selector_loss"]) / float(row["sbs_loss"])
    ok = ratio <= 1.1
    verdict(4, ok, f"budget {budget}: selector {float(row['selector_loss']):.3f} vs SBS {row['sbs']} "
                   f"{float(row['sbs_loss']):.3f}, ratio {ratio:.3f}")
    assert ok


def test_criterion_5_loss_identities(desk_out, verdict):
    out, _ = desk_out
    cfg = desk_config()
    problems = []
    for b in cfg.a2_budgets:
        perf = performance_table(out, b)
        for label, algs in (("", ORDER), ("_no-BFGS", tuple(a for a in ORDER if a != "BFGS"))):
            if any(float(r["loss"]) < 0 for r in read_csv(out / f"losses_{b}{label}.csv")):
                problems.append(f"negative loss at {b}{label}")
            vbs = {t: true_best(row, algs)[0][0] for t, row in perf.items()}
            if any(r.loss != 0 for r in loss(perf, vbs, algs)):
                problems.append(f"VBS loss at {b}{label}")
            base = vbs_sbs(perf, algs, vbs)
            sbs = vbs_sbs(perf, algs, constant_selection(perf, base.sbs))
            if base.vbs_loss != 0 or base.gap_closed != 1.0 or sbs.gap_closed != 0.0:
                problems.append(f"gap identities at {b}{label}")
    ok = not problems
    verdict(5, ok, "L >= 0, VBS loss 0, gap_closed(VBS)=1, gap_closed(SBS)=0 on all budgets and subsets"
            if ok else "; ".join(problems))
    assert ok


def test_criterion_6_tree_split_oracle(verdict):
    rng = np.random.default_rng(6)
    mismatches = {}
    for c in Criterion:
        data = [random_dataset(rng) for _ in range(100)]
        mismatches[c.value] = int(sum(root_mismatch(X, y, c) for X, y in data))
    ok = sum(mismatches.values()) == 0
    verdict(6, ok, f"root-split mismatches over 100 datasets per criterion: {mismatches}")
    assert ok


def test_criterion_7_feature_correctness(verdict):
    rng = np.random.default_rng(7)
    X = rng.uniform(-5, 5, (150, 5))
    adj = compute_features(SampleSet(X, X @ rng.normal(size=5) + 1)).as_dict()["ela_meta.lin_simple.adj_r2"]
    half = rng.normal(size=75)
    skew = compute_features(SampleSet(X, np.concatenate([half, -half]))).as_dict()["ela_distr.skewness"]
    worst = 0.0
    for case in load_ela_reference():
        got = compute_features(SampleSet(np.array(case["X"]), np.array(case["y"]))).as_dict()
        for k, ref in case["features"].items():
            worst = max(worst, abs(got[k] - ref) / abs(ref) if abs(ref) > 1e-12 else abs(got[k] - ref))
    ok = abs(adj - 1) <= 1e-9 and abs(skew) <= 1e-9 and worst <= 0.05
    verdict(7, ok, f"adj R2 - 1 = {adj - 1:.1e}, skewness {skew:.1e}, "
                   f"worst relative deviation from reference on 10 sets {worst:.1e}")
    assert ok


def test_criterion_8_warm_start_contract(desk_out, verdict):
    out, _ = desk_out
    recs = read_archive(out / "archive.jsonl")
    monotone = all(np.all(np.diff(r["best_so_far"]) <= 0) for r in recs)
    states = [SwitchState.from_record(r) for r in recs if r["algorithm"] == "BFGS"][:20]
    worst = max(float(np.abs(warm_start("BFGS", s, 0).inverse_hessian - s.cma_sigma ** 2 * s.cma_C).max())
                for s in states)
    ident = SwitchState(np.zeros(5), 0.0, np.zeros(5), 0.7, np.eye(5), "", 0)
    iso = np.array_equal(warm_start("BFGS", ident, 0).inverse_hessian, 0.7 ** 2 * np.eye(5))
    ok = monotone and len(states) == 20 and worst <= 1e-12 and iso
    verdict(8, ok, f"{len(recs)} concatenated curves nonincreasing: {monotone}; "
                   f"max |H - sigma^2 C| over {len(states)} states {worst:.1e}; sigma^2 I case exact: {iso}")
    assert ok


def test_criterion_9_parallel_invariance(desk_out, desk_out_parallel, verdict):
    serial, _ = desk_out
    names = sorted(p.name for p in serial.glob("*.csv"))
    other = sorted(p.name for p in desk_out_parallel.glob("*.csv"))
    _, mismatch, errors = filecmp.cmpfiles(serial, desk_out_parallel, names, shallow=False)
    ok = names == other and not mismatch and not errors and len(names) > 20
    verdict(9, ok, f"{len(names)} result CSVs at jobs=1 vs jobs=8: "
                   + ("byte-identical" if ok else f"differ: {mismatch + errors}"))
    assert ok


def test_criterion_10_reference_suite_agreement(verdict):
    worst, funcs = 0.0, set()
    for fid, iid, d, _, x, ref in load_probe_rows():
        funcs.add(fid)
        got = instantiate((fid, iid, d))(x)
        worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    ok = worst <= 1e-6 and funcs == set(range(1, 25))
    verdict(10, ok, f"{len(funcs)} functions, worst relative deviation {worst:.1e}")
    assert ok
