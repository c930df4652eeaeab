"""Feature, training and selection stages; each reads and writes files under ``out``."""
import csv
import json
import logging
import pickle
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from ..features import SCHEMA_VERSION, SampleSet, compute_features, feature_schema
from ..regression import TargetType, train_all
from ..selector import ORDER, confusion, counts, loss, select, vbs_sbs
from .collect import ARCHIVE, QUARANTINE, fixed_budget_performance, read_archive
from .config import ProtocolConfig

log = logging.getLogger(__name__)

FEATURES = "features.csv"
FEATURE_FLAGS = "feature_flags.csv"
PERFORMANCE = "performance.csv"
CONVERGENCE = "convergence.csv"
PREDICTIONS = "predictions.csv"
CV_REPORTS = "cv_reports.csv"
BASELINES = "baselines.csv"
COUNTS_BEST = "counts_best.csv"
COUNTS_SELECTED = "counts_selected.csv"
MODELS = "models"
ID_COLS = ["function", "instance", "repetition"]


class MissingStage(RuntimeError):
    pass


def fmt(v) -> str:
    return repr(float(v))


def _require(out: Path, name: str, stage: str) -> Path:
    p = out / name
    if not p.exists():
        raise MissingStage(f"{p} not found; run the '{stage}' stage first")
    return p


def _write(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _load_archive(cfg: ProtocolConfig, out: Path) -> list[dict]:
    path = _require(out, ARCHIVE, "collect")
    recs = read_archive(path, out / QUARANTINE)
    keys = {(r["function"], r["instance"], r["repetition"], r["algorithm"]) for r in recs}
    gaps = [k for k in cfg.run_keys()
            if (k.function, k.instance, k.repetition, k.algorithm) not in keys]
    if gaps:
        raise MissingStage(f"archive lacks {len(gaps)} runs (first: {gaps[0]}); rerun 'collect'")
    return recs


def subset_label(excluded) -> str:
    return "full" if not excluded else "no-" + "-".join(excluded)


# --------------------------------------------------------------- features

def _features_for(args):
    triple, X, y = args
    return triple, compute_features(SampleSet(X, y))


def features(cfg: ProtocolConfig, out: Path | None = None):
    out = Path(out or cfg.out)
    recs = _load_archive(cfg, out)
    first = {}
    for rec in recs:
        t = (rec["function"], rec["instance"], rec["repetition"])
        if t not in first:
            first[t] = rec
    tasks = []
    for t in cfg.triples():
        s = first[t]["samples"][:cfg.feature_budget]
        tasks.append((t, np.array([p[0] for p in s]), np.array([p[1] for p in s])))
    if cfg.jobs > 1:
        with get_context("fork").Pool(cfg.jobs) as pool:
            results = pool.map(_features_for, tasks, chunksize=4)
    else:
        results = [_features_for(t) for t in tasks]
    schema = feature_schema()
    _write(out / FEATURES, ID_COLS + schema,
           [[*t, *(fmt(v) for v in fv.values)] for t, fv in results])
    _write(out / FEATURE_FLAGS, ID_COLS + ["imputed"],
           [[*t, ";".join(fv.imputed)] for t, fv in results])

    budgets = [0] + list(cfg.a2_budgets)
    rows = []
    perf = {b: fixed_budget_performance(recs, b) for b in budgets}
    for t in cfg.triples():
        for a in cfg.algorithms:
            rows.append([*t, a, *(fmt(perf[b][t][a]) for b in budgets)])
    _write(out / PERFORMANCE, ID_COLS + ["algorithm"] + [f"p{b}" for b in budgets], rows)

    # mean log10 best-so-far precision per function and algorithm, every evaluation
    acc = {}
    for rec in recs:
        prec = np.maximum(np.asarray(rec["best_so_far"]) - rec["f_opt"], 1e-8)
        acc.setdefault((rec["function"], rec["algorithm"]), []).append(np.log10(prec))
    rows = []
    for (f, a) in sorted(acc, key=lambda k: (k[0], ORDER.index(k[1]))):
        curve = np.mean(acc[(f, a)], axis=0)
        pb = cfg.a1_budget
        rows.extend([f, a, e + 1, e + 1 - pb, fmt(v)] for e, v in enumerate(curve))
    _write(out / CONVERGENCE, ["function", "algorithm", "evaluation", "a2_evaluation",
                               "mean_log10_precision"], rows)
    return out / FEATURES


def _load_tables(cfg: ProtocolConfig, out: Path):
    feats = _read(_require(out, FEATURES, "features"))
    perf = _read(_require(out, PERFORMANCE, "features"))
    schema = feature_schema()
    rows = {(int(r["function"]), int(r["instance"]), int(r["repetition"])): r for r in feats}
    triples = cfg.triples()
    missing = [t for t in triples if t not in rows]
    if missing:
        raise MissingStage(f"features missing for {len(missing)} runs; rerun 'features'")
    X = np.array([[float(rows[t][c]) for c in schema] for t in triples])
    table = {}
    for r in perf:
        t = (int(r["function"]), int(r["instance"]), int(r["repetition"]))
        for b in [0] + list(cfg.a2_budgets):
            table.setdefault(b, {}).setdefault(t, {})[r["algorithm"]] = float(r[f"p{b}"])
    return triples, X, table


# ------------------------------------------------------------------ train

def train(cfg: ProtocolConfig, out: Path | None = None):
    out = Path(out or cfg.out)
    triples, X, table = _load_tables(cfg, out)
    groups = np.array([t[1] for t in triples])
    inner = np.array([t[2] for t in triples])
    performance = {}
    for a in cfg.algorithms:
        for b in cfg.a2_budgets:
            performance[(a, b)] = np.array([table[b].get(t, {}).get(a, np.nan) for t in triples])
    results = train_all(X, groups, inner, performance, cfg.grid, cfg.seed,
                        algorithms=cfg.algorithms, budgets=cfg.a2_budgets,
                        n_groups=len(cfg.instances), jobs=cfg.jobs, schema_version=SCHEMA_VERSION)
    mdir = out / MODELS
    mdir.mkdir(exist_ok=True)
    for key, (report, model) in sorted(results.items()):
        name = "{}_{}_{}".format(*key)
        with open(mdir / f"{name}.pkl", "wb") as fh:
            pickle.dump(model, fh)
        side = {"algorithm": key[0], "budget": key[1], "target_type": key[2],
                "hyperparameters": report.chosen.to_dict(), "seed": model.seed,
                "schema_version": SCHEMA_VERSION, "n_rows": len(triples),
                "fold_r2": report.fold_r2, "mean_r2": report.mean_r2,
                "poisson_pruned": report.poisson_pruned}
        (mdir / f"{name}.json").write_text(json.dumps(side, indent=1, sort_keys=True) + "\n")
    for tt in TargetType:
        rows = [[a, *(fmt(results[(a, b, tt.value)][0].mean_r2) for b in cfg.a2_budgets)]
                for a in cfg.algorithms]
        _write(out / f"r2_{tt.value.lower()}.csv", ["algorithm"] + [str(b) for b in cfg.a2_budgets], rows)
    rows = []
    for key, (report, _) in sorted(results.items()):
        for g, s, fl, h in zip(report.fold_groups, report.fold_r2, report.fold_flags, report.fold_hyper):
            rows.append([*key, g, fmt(s), int(fl), json.dumps(h.to_dict(), sort_keys=True)])
    _write(out / CV_REPORTS, ["algorithm", "budget", "target_type", "test_instance", "r2",
                              "r2_undefined", "hyperparameters"], rows)
    rows = []
    for b in cfg.a2_budgets:
        for k, t in enumerate(triples):
            for a in cfg.algorithms:
                rows.append([*t, b, a, fmt(results[(a, b, "LOG10")][0].oof_predictions[k])])
    _write(out / PREDICTIONS, ID_COLS + ["budget", "algorithm", "predicted_log10"], rows)
    return results


# ----------------------------------------------------------------- select

def load_predictions(out: Path) -> dict:
    pred = {}
    for r in _read(_require(out, PREDICTIONS, "train")):
        t = (int(r["function"]), int(r["instance"]), int(r["repetition"]))
        pred.setdefault(int(r["budget"]), {}).setdefault(t, {})[r["algorithm"]] = float(r["predicted_log10"])
    return pred


def portfolio_subsets(cfg: ProtocolConfig) -> list[tuple]:
    subsets = [((), cfg.algorithms)]
    if cfg.exclude:
        subsets.append((tuple(cfg.exclude), tuple(a for a in cfg.algorithms if a not in cfg.exclude)))
    return subsets


def select_stage(cfg: ProtocolConfig, out: Path | None = None):
    out = Path(out or cfg.out)
    _, _, table = _load_tables(cfg, out)
    pred = load_predictions(out)
    base_rows, best_rows, sel_rows = [], [], []
    summary = {}
    for excluded, algs in portfolio_subsets(cfg):
        label = subset_label(excluded)
        suffix = "" if not excluded else f"_{label}"
        selections = {}
        for b in cfg.a2_budgets:
            perf = table[b]
            # same models for every subset: only the candidate list shrinks
            sel = select({t: {a: pred[b][t][a] for a in algs} for t in perf}, algs)
            selections[b] = sel
            recs = loss(perf, sel, algs)
            _write(out / f"losses_{b}{suffix}.csv",
                   ID_COLS + ["selected", "best", "F_A", "F_Astar", "loss"],
                   [[*r.run_id, r.selected, ";".join(r.best), fmt(r.f_a), fmt(r.f_astar), fmt(r.loss)]
                    for r in recs])
            cm = confusion(perf, sel, algs)
            rows = [[a, *cm.counts[i].tolist(), int(cm.counts[i].sum())] for i, a in enumerate(cm.labels)]
            rows.append(["total", *cm.counts.sum(axis=0).tolist(), int(cm.counts.sum())])
            rows.append(["excluded", *[""] * len(cm.labels), cm.excluded])
            _write(out / f"confusion_{b}{suffix}.csv", ["true\\selected", *cm.labels, "total"], rows)
            bl = vbs_sbs(perf, algs, sel)
            base_rows.append([label, b, bl.sbs, fmt(bl.sbs_loss), fmt(bl.selector_loss),
                              fmt(bl.vbs_loss), fmt(bl.gap_closed)])
            summary[(label, b)] = bl
        ct = counts({b: table[b] for b in cfg.a2_budgets}, selections, algs)
        for i, a in enumerate(ct.algorithms):
            best_rows.append([label, a, *ct.best[i].tolist()])
            sel_rows.append([label, a, *ct.selected[i].tolist()])
    _write(out / BASELINES, ["portfolio", "budget", "sbs", "sbs_loss", "selector_loss", "vbs_loss",
                             "gap_closed"], base_rows)
    head = ["portfolio", "algorithm", *[str(b) for b in cfg.a2_budgets]]
    _write(out / COUNTS_BEST, head, best_rows)
    _write(out / COUNTS_SELECTED, head, sel_rows)
    return summary
