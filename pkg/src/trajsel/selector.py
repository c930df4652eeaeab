"""Per-run algorithm selection, losses, baselines, confusion and count tables."""
from dataclasses import dataclass

import numpy as np

from .portfolio.base import ALGORITHMS

CAP = 1e-8
ORDER = tuple(a.value for a in ALGORITHMS)


def _ordered(portfolio) -> list[str]:
    names = [str(getattr(a, "value", a)) for a in portfolio]
    unknown = set(names) - set(ORDER)
    if unknown:
        raise ValueError(f"unknown algorithms {sorted(unknown)}")
    return [a for a in ORDER if a in names]


def select(pred: dict, portfolio=ORDER) -> dict:
    """Argmin of predicted log precision per run; ties go to the earlier algorithm in ORDER."""
    algs = _ordered(portfolio)
    missing = [(rid, a) for rid, row in pred.items() for a in algs if a not in row]
    if missing:
        raise ValueError(f"missing predictions: {missing[:10]}")
    out = {}
    for rid, row in pred.items():
        best = algs[0]
        for a in algs[1:]:
            if row[a] < row[best]:
                best = a
        out[rid] = best
    return out


@dataclass(frozen=True)
class LossRecord:
    run_id: tuple
    selected: str
    best: tuple
    f_a: float
    f_astar: float
    loss: float


def true_best(row: dict, algs, cap: float = CAP) -> tuple[tuple, float]:
    capped = {a: max(float(row[a]), cap) for a in algs}
    f_star = min(capped.values())
    return tuple(a for a in algs if capped[a] == f_star), f_star


def loss(perf: dict, selection: dict, portfolio=ORDER, cap: float = CAP) -> list[LossRecord]:
    """Loss per run: log10 F_A - log10 F_A*, both capped at ``cap`` first."""
    algs = _ordered(portfolio)
    recs = []
    for rid in sorted(selection):
        row = perf[rid]
        best, f_star = true_best(row, algs, cap)
        sel = selection[rid]
        f_a = max(float(row[sel]), cap)
        recs.append(LossRecord(rid, sel, best, f_a, f_star, float(np.log10(f_a) - np.log10(f_star))))
    return recs


def constant_selection(perf: dict, algorithm: str) -> dict:
    return {rid: algorithm for rid in perf}


@dataclass(frozen=True)
class Baselines:
    vbs_loss: float
    sbs: str
    sbs_loss: float
    selector_loss: float
    gap_closed: float


def gap_closed(sbs_loss: float, selector_loss: float) -> float:
    if sbs_loss == 0:
        return 1.0 if selector_loss == 0 else -np.inf
    return min((sbs_loss - selector_loss) / sbs_loss, 1.0)


def vbs_sbs(perf: dict, portfolio=ORDER, selection: dict | None = None, cap: float = CAP) -> Baselines:
    algs = _ordered(portfolio)
    means = {a: float(np.mean([r.loss for r in loss(perf, constant_selection(perf, a), algs, cap)]))
             for a in algs}
    sbs = min(algs, key=lambda a: (means[a], algs.index(a)))
    vbs_sel = {rid: true_best(perf[rid], algs, cap)[0][0] for rid in perf}
    vbs = float(np.mean([r.loss for r in loss(perf, vbs_sel, algs, cap)]))
    if selection is None:
        sel_loss = means[sbs]
    else:
        sel_loss = float(np.mean([r.loss for r in loss(perf, selection, algs, cap)]))
    return Baselines(vbs, sbs, means[sbs], sel_loss, gap_closed(means[sbs], sel_loss))


@dataclass
class ConfusionMatrix:
    labels: list
    counts: np.ndarray        # rows: true single best, columns: selected
    excluded: int

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.excluded


def confusion(perf: dict, selection: dict, portfolio=ORDER, cap: float = CAP) -> ConfusionMatrix:
    """A run is left out when two or more algorithms other than the selected one tie for best."""
    algs = _ordered(portfolio)
    idx = {a: i for i, a in enumerate(algs)}
    M = np.zeros((len(algs), len(algs)), dtype=int)
    excluded = 0
    for rid, sel in selection.items():
        best, _ = true_best(perf[rid], algs, cap)
        others = [a for a in best if a != sel]
        if len(others) >= 2:
            excluded += 1
            continue
        row = sel if sel in best else best[0]
        M[idx[row], idx[sel]] += 1
    return ConfusionMatrix(algs, M, excluded)


@dataclass
class CountsTable:
    algorithms: list
    budgets: list
    best: np.ndarray          # algorithms x budgets, ties counted for every tied algorithm
    selected: np.ndarray


def counts(perf_by_budget: dict, selection_by_budget: dict, portfolio=ORDER, cap: float = CAP) -> CountsTable:
    algs = _ordered(portfolio)
    budgets = sorted(perf_by_budget)
    best = np.zeros((len(algs), len(budgets)), dtype=int)
    chosen = np.zeros_like(best)
    for j, b in enumerate(budgets):
        perf = perf_by_budget[b]
        for rid in perf:
            for a in true_best(perf[rid], algs, cap)[0]:
                best[algs.index(a), j] += 1
        for rid, a in selection_by_budget[b].items():
            chosen[algs.index(a), j] += 1
    return CountsTable(algs, budgets, best, chosen)
