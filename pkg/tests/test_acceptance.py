"""Acceptance criteria, one test per criterion, at their stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion. The capacity sweep and the mutable-memory run are
shared module-scoped fixtures because the mutable cell is placed one
octave inside the measured krop capacity.

Everything is seeded: re-running reproduces identical measurements
(timing medians excepted, though their ordering is asserted with wide
margins).
"""

import csv
import math

import numpy as np
import pytest

from krop import (
    KropParams,
    direct_cleanup,
    krop_cleanup,
    krop_materialize,
    krop_params,
    krop_row,
    substream,
    sylvester_codebook,
)
from krop.experiments import (
    ExperimentConfig,
    run_capacity,
    run_mutable,
    run_timing,
    write_report,
)
from krop.hrr import circular_convolve, circular_correlate

from oracles import convolve_loop, correlate_loop

MASTER_SEED = 42


def announce(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] {name}{suffix}")


# --- shared experiment runs -------------------------------------------------

@pytest.fixture(scope="module")
def capacity_report():
    # J starts at 1 (not the survey default of 2) so capacities below 4
    # remain measurable at K=8, where they genuinely sit.
    config = ExperimentConfig(
        "capacity",
        k_values=[8, 10, 12],
        j_values=list(range(1, 9)),
        trials=30,
        families=["normal", "sylvester", "krop"],
        master_seed=MASTER_SEED,
    )
    return run_capacity(config)


@pytest.fixture(scope="module")
def krop_capacity_k12(capacity_report):
    capacity = capacity_report.summary["capacity"]["krop"]["12"]
    assert capacity >= 8, "krop capacity at K=12 too small to place the mutable cell"
    return capacity


@pytest.fixture(scope="module")
def mutable_report(krop_capacity_k12):
    config = ExperimentConfig(
        "mutable",
        pairs=[(krop_capacity_k12 // 2, 4096)],
        trials=10,
        steps=30,
        master_seed=MASTER_SEED,
    )
    return run_mutable(config)


@pytest.fixture(scope="module")
def timing_report():
    config = ExperimentConfig(
        "timing",
        k_values=list(range(1, 15)),
        reps=10,
        warmup=3,
        direct_k_max=14,
        master_seed=MASTER_SEED,
    )
    return run_timing(config)


# --- criteria ----------------------------------------------------------------

def test_cleanup_oracle_equivalence():
    """Butterfly argmax == dense argmax, K 1..10, 100 seeded inputs each."""
    disagreements = 0
    near_ties = 0
    for k in range(1, 11):
        for trial in range(100):
            params = krop_params(
                k, "uniform-random", substream(MASTER_SEED, "acc-params", k, trial)
            )
            u = substream(MASTER_SEED, "acc-oracle", k, trial).normal(0.0, 1.0, 2 ** k)
            dense = direct_cleanup(krop_materialize(params), u)
            fast = krop_cleanup(params, u)
            top_two = np.partition(dense.scores, -2)[-2:]
            if top_two[1] - top_two[0] <= 1e-9:
                near_ties += 1
                continue
            if fast.index != dense.index:
                disagreements += 1
    ok = disagreements == 0 and near_ties == 0
    announce("cleanup oracle equivalence",
             ok, f"{disagreements} disagreements, {near_ties} near-ties / 1000")
    assert disagreements == 0
    assert near_ties == 0


def test_row_materialization_correctness():
    """Single-row construction == dense recursion row, K 1..6, every index."""
    worst = 0.0
    for k in range(1, 7):
        params = krop_params(
            k, "uniform-random", substream(MASTER_SEED, "acc-rows", k)
        )
        dense = krop_materialize(params).rows
        for i in range(2 ** k):
            worst = max(worst, float(np.max(np.abs(krop_row(params, i) - dense[i]))))
    ok = worst <= 1e-12
    announce("row materialization correctness", ok, f"max abs err {worst:.2e}")
    assert ok


def test_structural_invariants():
    """Symmetry, orthogonality, and the quarter-pi Hadamard special case."""
    worst_symmetry = 0.0
    worst_orthogonality = 0.0
    for k in range(1, 7):
        params = krop_params(
            k, "uniform-random", substream(MASTER_SEED, "acc-struct", k)
        )
        h = krop_materialize(params).rows
        worst_symmetry = max(worst_symmetry, float(np.max(np.abs(h - h.T))))
        worst_orthogonality = max(
            worst_orthogonality, float(np.max(np.abs(h @ h.T - np.eye(2 ** k))))
        )
    sign_match = True
    worst_magnitude = 0.0
    for k in range(1, 7):
        quarter = krop_materialize(KropParams(np.full(k, math.pi / 4))).rows
        sylvester = sylvester_codebook(k).rows
        sign_match &= bool(np.all(np.sign(quarter) == np.sign(sylvester)))
        worst_magnitude = max(
            worst_magnitude, float(np.max(np.abs(np.abs(quarter) - np.abs(sylvester))))
        )
    ok = (worst_symmetry <= 1e-12 and worst_orthogonality <= 1e-10
          and sign_match and worst_magnitude <= 1e-12)
    announce(
        "structural invariants", ok,
        f"sym {worst_symmetry:.2e}, orth {worst_orthogonality:.2e}, "
        f"signs {'ok' if sign_match else 'MISMATCH'}, mag {worst_magnitude:.2e}",
    )
    assert ok


def test_binding_operator_oracle():
    """FFT binding/unbinding == definitional double loops, N up to 4096."""
    worst = 0.0
    for k in range(1, 13):
        n = 2 ** k
        for case in range(20):
            rng = substream(MASTER_SEED, "acc-conv", n, case)
            a = rng.normal(size=n)
            b = rng.normal(size=n)
            t = rng.normal(size=n)
            worst = max(worst, float(np.max(np.abs(
                circular_convolve(a, b) - convolve_loop(a, b)))))
            worst = max(worst, float(np.max(np.abs(
                circular_correlate(a, t) - correlate_loop(a, t)))))
    ok = worst <= 1e-9
    announce("binding operator oracle", ok, f"max abs err {worst:.2e}")
    assert ok


def _median_seconds(report, method):
    out = {}
    for record in report.records:
        if record["method"] == method and record["seconds"] is not None:
            out.setdefault(record["K"], []).append(record["seconds"])
    return {k: float(np.median(v)) for k, v in out.items()}


def test_timing_crossover(timing_report):
    """Butterfly beats dense for K >= 12 and grows at least 0.5 slower in slope."""
    direct = _median_seconds(timing_report, "direct")
    fast = _median_seconds(timing_report, "krop")
    faster = {k: fast[k] < direct[k] for k in (12, 13, 14)}
    ks = np.array([10, 11, 12, 13, 14])
    log_n = np.log([2.0 ** k for k in ks])
    direct_slope = float(np.polyfit(log_n, np.log([direct[k] for k in ks]), 1)[0])
    fast_slope = float(np.polyfit(log_n, np.log([fast[k] for k in ks]), 1)[0])
    gap = direct_slope - fast_slope
    agreements = [
        r["index_agreement"] for r in timing_report.records
        if r["index_agreement"] is not None
    ]
    ok = all(faster.values()) and gap >= 0.5 and all(a == 1 for a in agreements)
    announce(
        "timing crossover", ok,
        f"median faster at K>=12: {faster}; slopes dense {direct_slope:.2f} "
        f"vs butterfly {fast_slope:.2f} (gap {gap:.2f})",
    )
    assert all(faster.values()), (direct, fast)
    assert gap >= 0.5
    assert all(a == 1 for a in agreements)


def test_capacity_parity(capacity_report):
    """krop capacity within 2x of normal at K in {8, 10, 12}; sylvester below."""
    capacity = capacity_report.summary["capacity"]
    within = {}
    for k in ("8", "10", "12"):
        krop_cap = capacity["krop"][k]
        normal_cap = capacity["normal"][k]
        within[k] = krop_cap <= 2 * normal_cap and normal_cap <= 2 * krop_cap
    sylvester_below = capacity["sylvester"]["12"] < capacity["krop"]["12"]
    ok = all(within.values()) and sylvester_below
    announce(
        "capacity parity", ok,
        f"krop {capacity['krop']} vs normal {capacity['normal']}; "
        f"sylvester@12 {capacity['sylvester']['12']}",
    )
    assert all(within.values()), capacity
    assert sylvester_below, capacity


def test_capacity_constant_band(capacity_report):
    """Measured krop capacity at K=12 sits within two octaves of N / 2^7."""
    cap = capacity_report.summary["capacity"]["krop"]["12"]
    ok = 2 ** 3 <= cap <= 2 ** 7
    announce("capacity constant band", ok, f"capacity {cap} in [8, 128]")
    assert ok


def test_mutable_memory_ordering(mutable_report, krop_capacity_k12):
    """krop stays >= 0.99 every step; sign ends below krop; none below sign or 0.5."""
    m = krop_capacity_k12 // 2
    cell = f"M={m},N=4096"
    records = mutable_report.records
    per_step = {}
    for strategy in ("krop", "sign", "none"):
        rows = [r for r in records if r["strategy"] == strategy]
        steps = sorted({r["step"] for r in rows})
        per_step[strategy] = [
            float(np.mean([r["retrieval_rate"] for r in rows if r["step"] == s]))
            for s in steps
        ]
    krop_ok = all(rate >= 0.99 for rate in per_step["krop"])
    sign_final = per_step["sign"][-1]
    krop_final = per_step["krop"][-1]
    none_final = per_step["none"][-1]
    ordering_ok = sign_final < krop_final and (
        none_final < sign_final or none_final < 0.5
    )
    ok = krop_ok and ordering_ok
    announce(
        "mutable memory ordering", ok,
        f"{cell}: final means krop {krop_final:.3f}, sign {sign_final:.3f}, "
        f"none {none_final:.3f}; krop per-step min {min(per_step['krop']):.3f}",
    )
    assert krop_ok, per_step["krop"]
    assert ordering_ok, (krop_final, sign_final, none_final)


def _csv_rows_without_seconds(path):
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    header = rows[0]
    if "seconds" in header:
        drop = header.index("seconds")
        rows = [row[:drop] + row[drop + 1:] for row in rows]
    return rows


def test_reports_deterministic(tmp_path):
    """Re-running any experiment with one seed reproduces CSVs modulo seconds."""
    configs = {
        "timing": ExperimentConfig("timing", k_values=[2, 4], reps=3, warmup=0,
                                   master_seed=MASTER_SEED),
        "capacity": ExperimentConfig("capacity", k_values=[5], j_values=[2, 3],
                                     trials=3, master_seed=MASTER_SEED),
        "mutable": ExperimentConfig("mutable", pairs=[(4, 64)], trials=2, steps=4,
                                    master_seed=MASTER_SEED),
    }
    runners = {"timing": run_timing, "capacity": run_capacity, "mutable": run_mutable}
    ok = True
    for name, config in configs.items():
        paths = []
        for attempt in ("first", "second"):
            path = tmp_path / f"{name}-{attempt}.csv"
            write_report(runners[name](config), "csv", path)
            paths.append(path)
        if name == "timing":
            same = (_csv_rows_without_seconds(paths[0])
                    == _csv_rows_without_seconds(paths[1]))
        else:
            same = paths[0].read_bytes() == paths[1].read_bytes()
        ok &= same
    announce("report determinism", ok)
    assert ok
