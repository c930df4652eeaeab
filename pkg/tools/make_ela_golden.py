"""Freeze reference ELA feature values for 10 sample sets into tests/data.

Run with an interpreter that has ``pflacco`` and ``coco-experiment``.
Sample sets mix a uniform design with contracting Gaussian clouds that look
like optimizer trajectories; values come from the reference BBOB suite.

    python tools/make_ela_golden.py
"""
import json
from pathlib import Path

import numpy as np
import cocoex
from pflacco.classical_ela_features import (
    calculate_dispersion, calculate_ela_distribution, calculate_ela_meta,
    calculate_information_content, calculate_nbc, calculate_pca)

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "ela_reference.json"
DIM, N = 5, 150
# (label, bbob function or None for the plain sphere, instance, design)
CASES = [
    ("sphere_uniform", None, 0, "uniform"),
    ("f1_i1_cloud", 1, 1, "cloud"),
    ("f3_i2_cloud", 3, 2, "cloud"),
    ("f8_i1_cloud", 8, 1, "cloud"),
    ("f10_i3_cloud", 10, 3, "cloud"),
    ("f15_i1_cloud", 15, 1, "cloud"),
    ("f17_i4_uniform", 17, 4, "uniform"),
    ("f21_i2_cloud", 21, 2, "cloud"),
    ("f23_i5_cloud", 23, 5, "cloud"),
    ("f24_i1_uniform", 24, 1, "uniform"),
]


def design(rng, kind):
    if kind == "uniform":
        return rng.uniform(-5.0, 5.0, size=(N, DIM))
    center = rng.uniform(-3.0, 3.0, size=DIM)
    drift = rng.normal(0.0, 1.0, size=DIM)
    rows = []
    for k in range(N):
        scale = 2.0 * 0.975 ** k
        c = center + drift * (1.0 - 0.98 ** k)
        rows.append(c + scale * rng.normal(size=DIM))
    return np.clip(np.array(rows), -5.0, 5.0)


def reference(X, y):
    out = {}
    out.update(calculate_ela_distribution(X, y))
    out.update(calculate_ela_meta(X, y))
    out.update(calculate_dispersion(X, y))
    out.update(calculate_information_content(X, y, ic_nn_start=0))
    out.update(calculate_nbc(X, y, dist_tie_breaker="first"))
    out.update(calculate_pca(X, y))
    return {k: (None if v is None else float(v)) for k, v in out.items()
            if not k.endswith("costs_runtime") and "quad_w_interact" not in k}


def main():
    rng = np.random.default_rng(7031)
    suite = cocoex.Suite("bbob", "", f"dimensions:{DIM} instance_indices:1-5")
    sets = []
    for label, fid, iid, kind in CASES:
        X = design(rng, kind)
        if fid is None:
            y = np.sum(X ** 2, axis=1)
        else:
            prob = suite.get_problem_by_function_dimension_instance(fid, DIM, iid)
            y = np.array([prob(x) for x in X])
            prob.free()
        sets.append({"label": label, "X": X.tolist(), "y": y.tolist(),
                     "features": reference(X, y)})
    OUT.write_text(json.dumps(sets, indent=1))


if __name__ == "__main__":
    main()
