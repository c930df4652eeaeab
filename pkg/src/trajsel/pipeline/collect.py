"""Run collection: one A1 prefix per (function, instance, repetition), five continuations."""
import json
import logging
import os
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from ..bbob import EvaluationBudget, instantiate
from ..portfolio import run
from ..warmstart import capture, warm_start
from .config import ORDER, ProtocolConfig, RunKey, derive_seeds

log = logging.getLogger(__name__)

ARCHIVE = "archive.jsonl"
QUARANTINE = "archive.quarantine.jsonl"
REQUIRED = ("function", "instance", "dim", "repetition", "algorithm", "seed",
            "phase_boundary", "samples", "best_so_far")


def collect_triple(cfg: ProtocolConfig, triple) -> list[dict]:
    """A1 once, then every portfolio algorithm warm-started from the same switch state."""
    f, i, r = triple
    inst = instantiate((f, i, cfg.dimension))
    a1_seed, _ = derive_seeds(cfg.seed, f, i, r, 0)
    a1 = run("CMAES", inst, EvaluationBudget(cfg.a1_budget), a1_seed)
    ref = f"f{f}_i{i}_r{r}_A1"
    state = capture(a1, a1.final_state, ref)
    records = []
    for alg in cfg.algorithms:
        run_seed, ws_seed = RunKey(f, i, r, alg).seeds(cfg.seed)
        a2 = run(alg, inst, EvaluationBudget(cfg.max_budget), run_seed, warm_start(alg, state, ws_seed))
        X = np.vstack([a1.X, a2.X])
        y = np.concatenate([a1.y, a2.y])
        rec = {"function": f, "instance": i, "dim": cfg.dimension, "repetition": r,
               "algorithm": alg, "seed": run_seed, "a1_seed": a1_seed,
               "phase_boundary": len(a1), "f_opt": inst.f_opt,
               "samples": [[x, v] for x, v in zip(X.tolist(), y.tolist())],
               "best_so_far": np.minimum.accumulate(y).tolist()}
        rec.update(state.to_record())
        records.append(rec)
    return records


def _worker(args):
    cfg, triple = args
    return triple, collect_triple(cfg, triple)


def record_key(rec: dict) -> tuple:
    return (int(rec["function"]), int(rec["instance"]), int(rec["repetition"]),
            ORDER.index(rec["algorithm"]))


def _dump(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":"))


def read_archive(path: Path, quarantine: Path | None = None) -> list[dict]:
    """Parse archive lines; malformed ones go to ``quarantine`` with a diagnostic."""
    good, bad = [], []
    if not path.exists():
        return good
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                missing = [k for k in REQUIRED if k not in rec]
                if missing:
                    raise ValueError(f"missing fields {missing}")
                if len(rec["samples"]) != len(rec["best_so_far"]):
                    raise ValueError("samples and best_so_far differ in length")
                good.append(rec)
            except (ValueError, TypeError) as exc:
                bad.append({"line": n, "error": str(exc), "raw": line[:200]})
    if bad and quarantine is not None:
        with open(quarantine, "a") as fh:
            for b in bad:
                fh.write(json.dumps(b) + "\n")
        log.warning("quarantined %d corrupt archive lines into %s", len(bad), quarantine)
    return good


def collect(cfg: ProtocolConfig, out: Path | None = None) -> Path:
    """Fill the archive, skipping triples already complete; rewrites it in key order."""
    out = Path(out or cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / ARCHIVE
    existing = read_archive(path, out / QUARANTINE)
    have = {}
    for rec in existing:
        have[record_key(rec)] = rec
    wanted = {ORDER.index(a) for a in cfg.algorithms}
    todo = [t for t in cfg.triples()
            if any((*t, a) not in have for a in wanted)]
    # keep only intact records, then append as work completes
    with open(path, "w") as fh:
        for k in sorted(have):
            fh.write(_dump(have[k]) + "\n")
    log.info("collect: %d of %d triples to run", len(todo), len(cfg.triples()))
    tasks = [(cfg, t) for t in todo]
    with open(path, "a") as fh:
        if cfg.jobs > 1 and len(tasks) > 1:
            with get_context("fork").Pool(cfg.jobs) as pool:
                for _, recs in pool.imap(_worker, tasks, chunksize=1):
                    for rec in recs:
                        have[record_key(rec)] = rec
                        fh.write(_dump(rec) + "\n")
                    fh.flush()
        else:
            for task in tasks:
                _, recs = _worker(task)
                for rec in recs:
                    have[record_key(rec)] = rec
                    fh.write(_dump(rec) + "\n")
                fh.flush()
    tmp = path.with_suffix(".tmp")
    triples = set(cfg.triples())
    with open(tmp, "w") as fh:
        for k in sorted(have):
            if k[3] in wanted and k[:3] in triples:
                fh.write(_dump(have[k]) + "\n")
    os.replace(tmp, path)
    return path


def fixed_budget_performance(records, budget: int) -> dict:
    """{(function, instance, repetition): {algorithm: precision}} after A1 + ``budget`` evaluations."""
    out = {}
    for rec in records:
        pb = int(rec["phase_boundary"])
        bsf = rec["best_so_far"]
        if budget < 0 or pb + budget > len(bsf):
            raise ValueError(f"budget {budget} is beyond the collected trace of length {len(bsf) - pb}")
        idx = pb + budget - 1
        prec = max(float(bsf[idx]) - float(rec["f_opt"]), 0.0)
        out.setdefault((rec["function"], rec["instance"], rec["repetition"]), {})[rec["algorithm"]] = prec
    return out
