import csv
import json
from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


def load_probe_rows():
    with open(DATA / "bbob_probe_values.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        d = int(r["dimension"])
        x = np.array([float(r[f"x{k}"]) for k in range(d)])
        out.append((int(r["function_id"]), int(r["instance_id"]), d, int(r["probe_index"]), x, float(r["f"])))
    return out


def load_optima():
    with open(DATA / "bbob_optima.csv", newline="") as fh:
        return [(int(r["function_id"]), int(r["instance_id"]), int(r["dimension"]), float(r["f_opt"]),
                 np.array([float(v) for v in r["x_opt"].split()])) for r in csv.DictReader(fh)]


def load_ela_reference():
    return json.loads((DATA / "ela_reference.json").read_text())


@pytest.fixture(scope="session")
def probe_rows():
    return load_probe_rows()


# ------------------------------------------------------------- desk pipeline

def run_desk(out: Path, jobs: int) -> float:
    import time

    from trajsel.cli import main

    t0 = time.perf_counter()
    code = main(["all", "--desk", "--out", str(out), "--jobs", str(jobs), "--exclude", "BFGS"])
    assert code == 0
    return time.perf_counter() - t0


@pytest.fixture(scope="session")
def desk_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk_serial")
    seconds = run_desk(out, jobs=1)
    return out, seconds


@pytest.fixture(scope="session")
def desk_out_parallel(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk_parallel")
    run_desk(out, jobs=8)
    return out


# ------------------------------------------------------- acceptance summary

ACCEPTANCE: dict = {}


@pytest.fixture
def verdict():
    """verdict(n, ok, detail) records one acceptance line, printed at the end of the run."""
    def record(n: int, ok: bool, detail: str):
        ACCEPTANCE[n] = (bool(ok), detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
