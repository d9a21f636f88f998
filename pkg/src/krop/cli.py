"""Command-line interface.

Subcommands ``timing``, ``capacity``, and ``mutable`` drive the seeded
experiments and write CSV/JSON reports; ``params``, ``row``, and
``cleanup`` are small utilities over the implicit codebook. Flags
override config-file values; the effective configuration is echoed
before running. Exit codes: 0 success, 1 internal error, 2 usage or
config error.

Vector files hold one full-precision decimal float per line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .cleanup import krop_cleanup
from .codebook import (
    SCHEME_EVEN,
    SCHEME_UNIFORM,
    krop_params,
    krop_row,
    load_params,
    save_params,
)
from .experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    run_capacity,
    run_mutable,
    run_timing,
    write_report,
)

RUNNERS = {"timing": run_timing, "capacity": run_capacity, "mutable": run_mutable}

CONFIG_FIELDS = {f.name for f in fields(ExperimentConfig)}


def _parse_k_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        return [int(text)]
    return list(range(int(lo), int(hi) + 1))


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for item in text.split(","):
        m, sep, n = item.partition(":")
        if not sep:
            raise ValueError(f"bad pair {item!r}; expected M:N")
        pairs.append((int(m), int(n)))
    return pairs


def write_vector(path: str | Path, vector: np.ndarray) -> None:
    Path(path).write_text(
        "\n".join(repr(float(x)) for x in vector) + "\n", encoding="utf-8"
    )


def read_vector(path: str | Path) -> np.ndarray:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    return np.array([float(ln) for ln in lines], dtype=np.float64)


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (fallback: env KROP_SEED, config file, 0)")
    parser.add_argument("--out", default=None, help="output directory for reports")
    parser.add_argument("--k", type=_parse_k_range, default=None, metavar="LO..HI",
                        help="K range, e.g. 2..10 (N = 2^K)")
    parser.add_argument("--k-max", type=int, default=None,
                        help="shorthand for --k 1..K_MAX")
    parser.add_argument("--reps", type=int, default=None,
                        help="timing repetitions per K")
    parser.add_argument("--trials", type=int, default=None, help="trials per cell")
    parser.add_argument("--steps", type=int, default=None,
                        help="overwrite steps per mutable trial")
    parser.add_argument("--families", default=None,
                        help="comma list: normal,binary,sylvester,krop")
    parser.add_argument("--strategies", default=None,
                        help="comma list: krop,sign,none")
    parser.add_argument("--pairs", type=_parse_pairs, default=None, metavar="M:N[,M:N...]",
                        help="mutable-memory (M, N) cells")
    parser.add_argument("--theta-scheme", choices=[SCHEME_EVEN, SCHEME_UNIFORM],
                        default=None, help="angle placement for krop codebooks")
    parser.add_argument("--threads", type=int, default=None,
                        help="parallel trials (default: 1 for timing, all cores otherwise)")
    parser.add_argument("--direct-k-max", type=int, default=None,
                        help="largest K timed with the dense clean-up route")
    parser.add_argument("--baseline-k-max", type=int, default=None,
                        help="largest K swept for normal/binary families")
    parser.add_argument("--warmup", type=int, default=None,
                        help="untimed warm-up repetitions before timing")
    parser.add_argument("--config", default=None, help="JSON config file (flags win)")
    parser.add_argument("--format", choices=["csv", "json", "both"], default="both",
                        help="report formats to write")


def _load_config_file(path: str) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = set(data) - CONFIG_FIELDS
    if unknown:
        raise ValueError(f"{path}: unknown config fields {sorted(unknown)}")
    return data


def _effective_config(args: argparse.Namespace, experiment: str) -> ExperimentConfig:
    values: dict = {"experiment": experiment}
    if args.config:
        file_values = _load_config_file(args.config)
        file_values.pop("experiment", None)
        values.update(file_values)

    k_values = args.k
    if k_values is None and args.k_max is not None:
        k_values = list(range(1, args.k_max + 1))
    flag_values = {
        "k_values": k_values,
        "trials": args.trials,
        "reps": args.reps,
        "steps": args.steps,
        "warmup": args.warmup,
        "theta_scheme": args.theta_scheme,
        "families": args.families.split(",") if args.families else None,
        "strategies": args.strategies.split(",") if args.strategies else None,
        "pairs": args.pairs,
        "direct_k_max": args.direct_k_max,
        "baseline_k_max": args.baseline_k_max,
        "threads": args.threads,
    }
    values.update({k: v for k, v in flag_values.items() if v is not None})

    seed = args.seed
    if seed is None and os.environ.get("KROP_SEED"):
        seed = int(os.environ["KROP_SEED"])
    if seed is not None:
        values["master_seed"] = seed
    return ExperimentConfig(**values)


def _cmd_experiment(args: argparse.Namespace) -> int:
    experiment = args.command
    config = _effective_config(args, experiment)
    out_dir = args.out if args.out is not None else config.out
    if out_dir is None:
        print("error: --out is required (no output directory configured)",
              file=sys.stderr)
        return 2
    resolved = config.resolve()
    print("config:", json.dumps(config.echo(), sort_keys=True))
    report = RUNNERS[experiment](resolved)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if args.format in ("csv", "both"):
        target = out / f"{experiment}.csv"
        write_report(report, "csv", target)
        written.append(str(target))
    if args.format in ("json", "both"):
        target = out / f"{experiment}.json"
        write_report(report, "json", target)
        written.append(str(target))
    print(f"{experiment}: {len(report.records)} records -> {', '.join(written)}")
    if report.summary and experiment == "capacity":
        print("capacity:", json.dumps(report.summary.get("capacity", {}),
                                      sort_keys=True))
    return 0


def _cmd_params(args: argparse.Namespace) -> int:
    seed = args.seed
    if seed is None and os.environ.get("KROP_SEED"):
        seed = int(os.environ["KROP_SEED"])
    if args.theta_scheme == SCHEME_UNIFORM:
        params = krop_params(args.k, SCHEME_UNIFORM, seed if seed is not None else 0)
    else:
        params = krop_params(args.k, SCHEME_EVEN)
    save_params(params, args.out)
    print(f"wrote K={params.K} scheme={params.scheme} params to {args.out}")
    return 0


def _cmd_row(args: argparse.Namespace) -> int:
    params = load_params(args.params)
    vector = krop_row(params, args.index)
    write_vector(args.out, vector)
    print(f"wrote row {args.index} (N={params.N}) to {args.out}")
    return 0


def _cmd_cleanup(args: argparse.Namespace) -> int:
    params = load_params(args.params)
    vector = read_vector(args.input)
    if vector.size != params.N:
        raise ValueError(
            f"input has {vector.size} entries, params define N={params.N}"
        )
    result = krop_cleanup(params, vector)
    print(f"index {result.index} score {float(result.scores[result.index])!r}")
    if args.emit_row:
        write_vector(args.emit_row, result.vector)
        print(f"wrote matched row to {args.emit_row}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krop",
        description="Vector-symbolic memory benchmarks over rotation-product codebooks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, doc in (
        ("timing", "time butterfly vs dense clean-up per dimension"),
        ("capacity", "sweep stored-pair counts per codebook family"),
        ("mutable", "overwrite associations and track retrieval over time"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_experiment_flags(p)
        p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("params", help="generate a codebook parameter file")
    p.add_argument("--k", type=int, required=True, help="number of angles (N = 2^K)")
    p.add_argument("--theta-scheme", choices=[SCHEME_EVEN, SCHEME_UNIFORM],
                   default=SCHEME_EVEN)
    p.add_argument("--seed", type=int, default=None,
                   help="seed for uniform-random angles (fallback: env KROP_SEED, 0)")
    p.add_argument("--out", required=True, help="output JSON file")
    p.set_defaults(func=_cmd_params)

    p = sub.add_parser("row", help="materialize one codebook row to a vector file")
    p.add_argument("--params", required=True, help="codebook parameter JSON file")
    p.add_argument("--index", type=int, required=True, help="row index in [0, 2^K)")
    p.add_argument("--out", required=True, help="output vector file")
    p.set_defaults(func=_cmd_row)

    p = sub.add_parser("cleanup", help="clean a vector against the implicit codebook")
    p.add_argument("--params", required=True, help="codebook parameter JSON file")
    p.add_argument("--input", required=True, help="input vector file")
    p.add_argument("--emit-row", default=None, help="also write the matched row here")
    p.set_defaults(func=_cmd_cleanup)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
