"""Static SVG figures built only from the stage CSVs."""
import csv
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .config import ProtocolConfig  # noqa: E402
from .stages import (BASELINES, CONVERGENCE, COUNTS_BEST, COUNTS_SELECTED, MissingStage,  # noqa: E402
                     portfolio_subsets, subset_label)

log = logging.getLogger(__name__)
FIGURES = "figures"
# fixed so repeated runs produce identical files
SVG_META = {"Date": None, "Creator": None}


def _read(path: Path, stage: str) -> list[dict]:
    if not path.exists():
        raise MissingStage(f"{path} not found; run the '{stage}' stage first")
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _save(fig, path: Path):
    plt.rcParams["svg.hashsalt"] = "trajsel"
    fig.savefig(path, format="svg", metadata=SVG_META)
    plt.close(fig)


def convergence_figure(out: Path, dest: Path, a1_budget: int) -> list[Path]:
    rows = _read(out / CONVERGENCE, "features")
    by_f = {}
    for r in rows:
        by_f.setdefault(int(r["function"]), {}).setdefault(r["algorithm"], []).append(
            (int(r["evaluation"]), float(r["mean_log10_precision"])))
    paths = []
    for f, curves in sorted(by_f.items()):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for a, pts in curves.items():
            e, v = np.array(pts).T
            ax.plot(e, v, label=a, lw=1)
        ax.axvline(a1_budget, color="grey", ls="--", lw=0.8)
        ax.set_xscale("log")
        ax.set_xlabel("evaluations")
        ax.set_ylabel("mean log10 precision")
        ax.set_title(f"f{f}")
        ax.legend(fontsize=7)
        fig.tight_layout()
        p = dest / f"convergence_f{f}.svg"
        _save(fig, p)
        paths.append(p)
    return paths


def loss_figure(out: Path, dest: Path, budget: int, label: str) -> Path:
    suffix = "" if label == "full" else f"_{label}"
    rows = _read(out / f"losses_{budget}{suffix}.csv", "select")
    by_f = {}
    for r in rows:
        by_f.setdefault(int(r["function"]), []).append(float(r["loss"]))
    fs = sorted(by_f)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.boxplot([by_f[f] for f in fs], showmeans=True,
               meanprops={"marker": "x", "markeredgecolor": "red"})
    ax.set_xticks(range(1, len(fs) + 1), [f"f{f}" for f in fs])
    ax.set_ylabel("loss (log10)")
    ax.set_title(f"selector loss, A2 budget {budget} ({label})")
    fig.tight_layout()
    p = dest / f"loss_{budget}_{label}.svg"
    _save(fig, p)
    return p


def _heatmap(ax, M, rows, cols, title, fmt="{}"):
    im = ax.imshow(M, cmap="viridis", aspect="auto")
    for (i, j), v in np.ndenumerate(M):
        ax.text(j, i, fmt.format(v), ha="center", va="center", color="w", fontsize=7)
    ax.set_xticks(range(len(cols)), cols)
    ax.set_yticks(range(len(rows)), rows)
    ax.set_title(title)
    return im


def r2_figure(out: Path, dest: Path) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
    for ax, tt in zip(axes, ("raw", "log10")):
        rows = _read(out / f"r2_{tt}.csv", "train")
        budgets = [k for k in rows[0] if k != "algorithm"]
        M = np.array([[float(r[b]) for b in budgets] for r in rows])
        im = _heatmap(ax, M, [r["algorithm"] for r in rows], budgets, f"LOGO R2 ({tt})", "{:.2f}")
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    p = dest / "r2.svg"
    _save(fig, p)
    return p


def confusion_figure(out: Path, dest: Path, budget: int, label: str) -> Path:
    suffix = "" if label == "full" else f"_{label}"
    rows = _read(out / f"confusion_{budget}{suffix}.csv", "select")
    head = [k for k in rows[0] if k not in ("true\\selected", "total")]
    body = [r for r in rows if r["true\\selected"] not in ("total", "excluded")]
    M = np.array([[int(r[c]) for c in head] for r in body])
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    _heatmap(ax, M, [r["true\\selected"] for r in body], head,
             f"confusion, budget {budget} ({label})")
    ax.set_xlabel("selected")
    ax.set_ylabel("true best")
    fig.tight_layout()
    p = dest / f"confusion_{budget}_{label}.svg"
    _save(fig, p)
    return p


def counts_figure(out: Path, dest: Path, label: str) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, (name, title) in zip(axes, [(COUNTS_BEST, "best"), (COUNTS_SELECTED, "selected")]):
        rows = [r for r in _read(out / name, "select") if r["portfolio"] == label]
        budgets = [k for k in rows[0] if k not in ("portfolio", "algorithm")]
        M = np.array([[int(r[b]) for b in budgets] for r in rows])
        im = _heatmap(ax, M, [r["algorithm"] for r in rows], budgets, title)
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    p = dest / f"counts_{label}.svg"
    _save(fig, p)
    return p


def report(cfg: ProtocolConfig, out: Path | None = None) -> list[Path]:
    out = Path(out or cfg.out)
    for name, stage in [(CONVERGENCE, "features"), ("r2_log10.csv", "train"), (BASELINES, "select")]:
        if not (out / name).exists():
            raise MissingStage(f"{out / name} not found; run the '{stage}' stage first")
    dest = out / FIGURES
    dest.mkdir(exist_ok=True)
    paths = convergence_figure(out, dest, cfg.a1_budget)
    paths.append(r2_figure(out, dest))
    for excluded, _ in portfolio_subsets(cfg):
        label = subset_label(excluded)
        for b in cfg.a2_budgets:
            paths.append(loss_figure(out, dest, b, label))
            paths.append(confusion_figure(out, dest, b, label))
        paths.append(counts_figure(out, dest, label))
    log.info("report: wrote %d figures to %s", len(paths), dest)
    return paths
