"""Freeze reference BBOB values into tests/data.

Run with an interpreter that has ``coco-experiment`` (cocoex) and ``ioh``
installed. The package itself never imports either.

    python tools/make_bbob_golden.py
"""
import csv
from pathlib import Path

import numpy as np
import cocoex
import ioh

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"
DIMS = (2, 5, 10)
INSTANCES = range(1, 6)
N_INSIDE = 8
N_OUTSIDE = 2


def probe_points(rng, dim):
    inside = rng.uniform(-5.0, 5.0, size=(N_INSIDE, dim))
    outside = rng.uniform(-7.0, 7.0, size=(N_OUTSIDE, dim))
    return np.vstack([inside, outside])


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240611)
    maxdim = max(DIMS)
    probe_rows, opt_rows = [], []
    for dim in DIMS:
        suite = cocoex.Suite("bbob", "", f"dimensions:{dim} instance_indices:1-5")
        for fid in range(1, 25):
            for iid in INSTANCES:
                prob = suite.get_problem_by_function_dimension_instance(fid, dim, iid)
                ref = ioh.get_problem(fid, iid, dim)
                pts = probe_points(rng, dim)
                for k, x in enumerate(pts):
                    f = float(prob(x))
                    pad = list(x) + [""] * (maxdim - dim)
                    probe_rows.append([fid, iid, dim, k, *pad, repr(f)])
                xo = list(ref.optimum.x)
                opt_rows.append([fid, iid, dim, repr(float(ref.optimum.y)),
                                 " ".join(repr(float(v)) for v in xo)])
                prob.free()
    with open(OUT / "bbob_probe_values.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function_id", "instance_id", "dimension", "probe_index",
                    *[f"x{i}" for i in range(maxdim)], "f"])
        w.writerows(probe_rows)
    with open(OUT / "bbob_optima.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function_id", "instance_id", "dimension", "f_opt", "x_opt"])
        w.writerows(opt_rows)


if __name__ == "__main__":
    main()
