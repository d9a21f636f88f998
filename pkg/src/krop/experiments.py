"""Seeded, replayable drivers for the three benchmark experiments.

- timing:   wall-clock of butterfly clean-up vs dense matrix-vector
            clean-up on the same inputs, per dimension and repetition.
- capacity: retrieval rate and success rate of the four codebook
            families as the number of stored pairs grows.
- mutable:  retrieval rate over time while associations are overwritten
            under the krop / sign / none erase strategies.

Every non-timing value in a report is a pure function of (config,
master seed): each (cell, trial) derives its own random sub-stream, so
any subset of trials can be re-run in isolation and reproduce exactly.
Reports serialize to CSV (one row per measurement) and JSON (config
echo, environment stamp, records, aggregates).
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from time import perf_counter

import numpy as np

from . import __version__
from .cleanup import NEAR_TIE_MARGIN, direct_cleanup, krop_cleanup
from .codebook import (
    FAMILY_BINARY,
    FAMILY_NORMAL,
    FAMILY_SYLVESTER,
    SCHEME_EVEN,
    ExplicitCodebook,
    KropParams,
    krop_materialize,
    krop_params,
    sample_binary_codebook,
    sample_normal_codebook,
)
from .memory import AssociativeStore, retrieval_rate
from .rng import ALGORITHM, substream

log = logging.getLogger(__name__)

EXPERIMENTS = ("timing", "capacity", "mutable")
FAMILIES = ("normal", "binary", "sylvester", "krop")
STRATEGIES = ("krop", "sign", "none")

CSV_SCHEMAS = {
    "timing": ["experiment", "K", "N", "rep", "method", "seconds", "index_agreement"],
    "capacity": [
        "experiment", "family", "K", "N", "J", "M", "trial", "retrieval_rate", "success",
    ],
    "mutable": ["experiment", "strategy", "M", "N", "trial", "step", "retrieval_rate"],
}


@dataclass
class ExperimentConfig:
    """One experiment run. Fields left as None take experiment defaults."""

    experiment: str
    k_values: list[int] | None = None
    j_values: list[int] | None = None
    trials: int | None = None
    reps: int | None = None
    steps: int | None = None
    warmup: int = 3
    theta_scheme: str = SCHEME_EVEN
    master_seed: int = 0
    families: list[str] | None = None
    strategies: list[str] | None = None
    pairs: list[tuple[int, int]] | None = None
    direct_k_max: int = 14
    baseline_k_max: int = 12
    threads: int | None = None
    out: str | None = None

    def resolve(self) -> "ExperimentConfig":
        """Fill defaults, validate, and return a fully-specified copy."""
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}"
            )
        cfg = replace(self)
        if cfg.k_values is None:
            cfg.k_values = (
                list(range(1, 16)) if cfg.experiment == "timing" else list(range(2, 16))
            )
        if cfg.trials is None:
            cfg.trials = 10 if cfg.experiment == "mutable" else 30
        if cfg.reps is None:
            cfg.reps = 30
        if cfg.steps is None:
            cfg.steps = 30
        if cfg.families is None:
            cfg.families = list(FAMILIES)
        if cfg.strategies is None:
            cfg.strategies = list(STRATEGIES)
        if cfg.pairs is None:
            cfg.pairs = [(8, 1024), (32, 4096)]
        if cfg.threads is None:
            cfg.threads = 1 if cfg.experiment == "timing" else (os.cpu_count() or 1)

        if not cfg.k_values:
            raise ValueError("K range must be nonempty")
        if any(k < 1 for k in cfg.k_values):
            raise ValueError("every K must be >= 1")
        if cfg.j_values is not None and any(j < 1 for j in cfg.j_values):
            raise ValueError("every J must be >= 1")
        for name, value in (
            ("trials", cfg.trials), ("reps", cfg.reps), ("steps", cfg.steps),
        ):
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        if cfg.warmup < 0:
            raise ValueError(f"warmup must be >= 0, got {cfg.warmup}")
        if cfg.master_seed < 0:
            raise ValueError(f"master seed must be >= 0, got {cfg.master_seed}")
        unknown = set(cfg.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families: {sorted(unknown)}")
        unknown = set(cfg.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")
        cfg.pairs = [(int(m), int(n)) for m, n in cfg.pairs]
        for m, n in cfg.pairs:
            if m < 1:
                raise ValueError(f"pair ({m}, {n}): M must be >= 1")
            if n < 4 or n & (n - 1):
                raise ValueError(f"pair ({m}, {n}): N must be a power of two >= 4")
        if cfg.threads < 1:
            raise ValueError(f"threads must be >= 1, got {cfg.threads}")
        if cfg.experiment == "capacity":
            if not self.capacity_cells(cfg):
                raise ValueError(
                    "capacity sweep is empty: need some K with J in [2, K-2] "
                    "(or explicit j_values fitting J <= K-2)"
                )
        return cfg

    @staticmethod
    def capacity_cells(cfg: "ExperimentConfig") -> list[tuple[str, int, int]]:
        """(family, K, J) cells honoring J <= K-2 and the baseline K cap."""
        cells = []
        for family in cfg.families:
            for k in cfg.k_values:
                if family in (FAMILY_NORMAL, FAMILY_BINARY) and k > cfg.baseline_k_max:
                    continue
                js = cfg.j_values if cfg.j_values is not None else range(2, k - 1)
                for j in js:
                    if j <= k - 2:
                        cells.append((family, k, j))
        return cells

    def echo(self) -> dict:
        """JSON-safe dict of the fully-resolved configuration."""
        data = asdict(self.resolve())
        data["pairs"] = [list(p) for p in data["pairs"]]
        return data


@dataclass
class ExperimentReport:
    """Config echo, environment stamp, raw records, and aggregates."""

    config: dict
    environment: dict
    records: list[dict]
    summary: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def _environment_stamp() -> dict:
    return {
        "host": platform.node(),
        "date": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "build": f"krop {__version__}",
        "python": platform.python_version(),
        "numpy": np.__version__,
        "rng": ALGORITHM,
    }


def _run_tasks(tasks, fn, threads: int) -> list:
    if threads <= 1:
        return [fn(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def run_timing(config: ExperimentConfig) -> ExperimentReport:
    """Time butterfly vs dense clean-up on identical noise vectors.

    Codebook materialization for the dense route is excluded from the
    timed region and reported separately in the summary. Above
    ``direct_k_max`` the dense route is skipped: its rows carry empty
    seconds and the agreement flag is empty for the whole dimension.
    """
    cfg = config.resolve()
    records: list[dict] = []
    materialize_seconds: dict[str, float] = {}
    notes = [
        "seconds cover the clean-up call only; dense-route codebook "
        "materialization is amortized outside the timed region and "
        "reported under summary.materialize_seconds",
        f"dense route skipped above K={cfg.direct_k_max} (empty seconds)",
    ]
    for k in cfg.k_values:
        n = 2 ** k
        if cfg.theta_scheme == SCHEME_EVEN:
            params = krop_params(k, SCHEME_EVEN)
        else:
            params = krop_params(
                k, cfg.theta_scheme, substream(cfg.master_seed, "timing-params", k)
            )
        run_direct = k <= cfg.direct_k_max
        codebook = None
        if run_direct:
            start = perf_counter()
            codebook = krop_materialize(params)
            materialize_seconds[str(k)] = perf_counter() - start
        for w in range(cfg.warmup):
            u = substream(cfg.master_seed, "timing-warmup", k, w).normal(0.0, 1.0, n)
            krop_cleanup(params, u)
            if run_direct:
                direct_cleanup(codebook, u)
        for rep in range(cfg.reps):
            u = substream(cfg.master_seed, "timing", k, rep).normal(0.0, 1.0, n)
            direct_seconds = None
            agreement = None
            if run_direct:
                start = perf_counter()
                direct_result = direct_cleanup(codebook, u)
                direct_seconds = perf_counter() - start
            start = perf_counter()
            krop_result = krop_cleanup(params, u)
            krop_seconds = perf_counter() - start
            if run_direct:
                agreement = int(direct_result.index == krop_result.index)
                if not agreement:
                    top_two = np.partition(direct_result.scores, -2)[-2:]
                    gap = float(top_two[1] - top_two[0])
                    if gap <= NEAR_TIE_MARGIN:
                        log.warning(
                            "near-tie at K=%d rep=%d: score gap %.3e; "
                            "indices %d (dense) vs %d (butterfly)",
                            k, rep, gap, direct_result.index, krop_result.index,
                        )
                    else:
                        raise RuntimeError(
                            f"clean-up mismatch at K={k} rep={rep}: dense "
                            f"{direct_result.index} vs butterfly {krop_result.index} "
                            f"with score gap {gap:.3e}"
                        )
            base = {"experiment": "timing", "K": k, "N": n, "rep": rep}
            records.append(
                base | {"method": "direct", "seconds": direct_seconds,
                        "index_agreement": agreement}
            )
            records.append(
                base | {"method": "krop", "seconds": krop_seconds,
                        "index_agreement": agreement}
            )
        del codebook
    return ExperimentReport(
        config=cfg.echo(),
        environment=_environment_stamp(),
        records=records,
        summary={"materialize_seconds": materialize_seconds},
        notes=notes,
    )


def _capacity_trial(cfg: ExperimentConfig, family: str, k: int, j: int, trial: int) -> dict:
    n, m = 2 ** k, 2 ** j
    rng = substream(cfg.master_seed, "capacity", family, k, j, trial)
    if family == "krop":
        values: KropParams | ExplicitCodebook = krop_params(k, cfg.theta_scheme, rng)
        strategy = "krop"
    elif family == FAMILY_SYLVESTER:
        values = KropParams(np.full(k, math.pi / 4.0), scheme="explicit")
        strategy = "krop"
    elif family == FAMILY_NORMAL:
        values = sample_normal_codebook(n, n, rng)
        strategy = "direct"
    else:
        values = sample_binary_codebook(n, n, rng)
        strategy = "direct"
    keys = ExplicitCodebook(
        rng.normal(0.0, 1.0 / math.sqrt(n), size=(m, n)), family=FAMILY_NORMAL
    )
    value_idx = rng.integers(0, n, size=m)
    store = AssociativeStore(keys, values, strategy)
    for key_index in range(m):
        store.write(key_index, int(value_idx[key_index]))
    rate = retrieval_rate(store)
    return {
        "experiment": "capacity",
        "family": family,
        "K": k,
        "N": n,
        "J": j,
        "M": m,
        "trial": trial,
        "retrieval_rate": rate,
        "success": int(rate == 1.0),
    }


def run_capacity(config: ExperimentConfig) -> ExperimentReport:
    """Sweep stored-pair counts M = 2^J per family and dimension N = 2^K.

    Per trial: fresh key vectors (i.i.d. normal, variance 1/N), fresh
    value codebook of N rows (and fresh angles for the krop family),
    value indices drawn uniformly with replacement. Success means
    retrieval rate exactly 1; capacity is the largest swept M whose
    success rate over trials is 1.
    """
    cfg = config.resolve()
    cells = ExperimentConfig.capacity_cells(cfg)
    notes = [
        "key vectors, value codebooks, and krop angles are drawn fresh per "
        "(cell, trial) sub-stream",
        f"normal/binary families capped at K={cfg.baseline_k_max} "
        "(dense clean-up does not scale further)",
    ]
    tasks = [
        (family, k, j, trial)
        for (family, k, j) in cells
        for trial in range(cfg.trials)
    ]
    records = _run_tasks(
        tasks, lambda t: _capacity_trial(cfg, *t), cfg.threads
    )
    success_rate: dict = {}
    capacity: dict = {}
    for family, k, j in cells:
        hits = [
            r["success"] for r in records
            if r["family"] == family and r["K"] == k and r["J"] == j
        ]
        rate = sum(hits) / len(hits)
        success_rate.setdefault(family, {}).setdefault(str(k), {})[str(j)] = rate
        if rate == 1.0:
            best = capacity.setdefault(family, {}).get(str(k), 0)
            capacity.setdefault(family, {})[str(k)] = max(best, 2 ** j)
        else:
            capacity.setdefault(family, {}).setdefault(str(k), 0)
    return ExperimentReport(
        config=cfg.echo(),
        environment=_environment_stamp(),
        records=records,
        summary={"success_rate": success_rate, "capacity": capacity},
        notes=notes,
    )


def _mutable_trial(cfg: ExperimentConfig, strategy: str, m: int, n: int, trial: int) -> list[dict]:
    k = n.bit_length() - 1
    rng = substream(cfg.master_seed, "mutable", strategy, m, n, trial)
    if strategy == "krop":
        values: KropParams | ExplicitCodebook = krop_params(k, cfg.theta_scheme, rng)
    elif strategy == "sign":
        values = sample_binary_codebook(n, n, rng)
    else:
        values = sample_normal_codebook(n, n, rng)
    keys = ExplicitCodebook(
        rng.normal(0.0, 1.0 / math.sqrt(n), size=(m, n)), family=FAMILY_NORMAL
    )
    store = AssociativeStore(keys, values, strategy)
    initial_values = rng.integers(0, n, size=m)
    for key_index in range(m):
        store.write(key_index, int(initial_values[key_index]))
    rows = []
    for step in range(cfg.steps):
        key_index = int(rng.integers(0, m))
        value_index = int(rng.integers(0, n))
        store.overwrite(key_index, value_index)
        rows.append({
            "experiment": "mutable",
            "strategy": strategy,
            "M": m,
            "N": n,
            "trial": trial,
            "step": step,
            "retrieval_rate": retrieval_rate(store),
        })
    return rows


def run_mutable(config: ExperimentConfig) -> ExperimentReport:
    """Overwrite one association per step and track retrieval over time.

    Key and value codebooks are fixed per trial (|A| = M, |V| = N); each
    key starts associated with a uniformly drawn value, then every step
    redraws one (key, value) pair uniformly from A x V and overwrites.
    Redrawing the key's current value is allowed; such no-op overwrites
    still exercise the erase path.
    """
    cfg = config.resolve()
    notes = [
        "value embeddings per strategy: krop rows (krop), binary rows (sign), "
        "normal rows (none); key embeddings always normal",
        "default (M, N) pairs sit near the measured capacity of the krop family",
    ]
    tasks = [
        (strategy, m, n, trial)
        for strategy in cfg.strategies
        for (m, n) in cfg.pairs
        for trial in range(cfg.trials)
    ]
    nested = _run_tasks(tasks, lambda t: _mutable_trial(cfg, *t), cfg.threads)
    records = [row for rows in nested for row in rows]
    summary: dict = {}
    for strategy in cfg.strategies:
        for m, n in cfg.pairs:
            cell = [
                r for r in records
                if r["strategy"] == strategy and r["M"] == m and r["N"] == n
            ]
            rates = [r["retrieval_rate"] for r in cell]
            finals = [
                r["retrieval_rate"] for r in cell if r["step"] == cfg.steps - 1
            ]
            summary.setdefault(strategy, {})[f"M={m},N={n}"] = {
                "mean_retrieval_rate": sum(rates) / len(rates),
                "final_step_mean": sum(finals) / len(finals),
            }
    return ExperimentReport(
        config=cfg.echo(),
        environment=_environment_stamp(),
        records=records,
        summary=summary,
        notes=notes,
    )


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(report: ExperimentReport, format: str, path: str | Path) -> None:
    """Persist a report as ``csv`` (schema per experiment) or ``json``."""
    path = Path(path)
    experiment = report.config["experiment"]
    if format == "csv":
        columns = CSV_SCHEMAS[experiment]
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(columns)
            for record in report.records:
                writer.writerow([_csv_cell(record.get(c)) for c in columns])
    elif format == "json":
        payload = {
            "config": report.config,
            "environment": report.environment,
            "records": report.records,
            "summary": report.summary,
            "notes": report.notes,
        }
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    else:
        raise ValueError(f"unknown report format {format!r}; expected csv or json")


def load_report(path: str | Path) -> ExperimentReport:
    """Read back a JSON report written by write_report."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return ExperimentReport(
        config=payload["config"],
        environment=payload["environment"],
        records=payload["records"],
        summary=payload.get("summary", {}),
        notes=payload.get("notes", []),
    )
