#!/usr/bin/env python3
"""Regenerate benchmark figures from experiment CSV reports.

Four figures, one per benchmark view:

  fig1  clean-up timing: per-repetition scatter (gray) and per-K mean
        curves (black) for the dense and butterfly methods, log time axis
  fig2  memory capacity: success rate vs N per codebook family at two
        representative M, plus a capacity-vs-N panel
  fig3  mutable memory: mean retrieval rate per time-step, by strategy
  fig4  mutable memory: retrieval rate averaged over steps and trials,
        by strategy across the (M, N) grid

Inputs are the CSV schemas written by the benchmark CLI; this script
validates headers and never modifies inputs. When a sibling ``.json``
report exists, its seed and sweep ranges are embedded in the figure
caption and PNG metadata, so a figure always names the run it renders.

Usage: plot.py --figure fig1 --in timing.csv --out fig1.png
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

# CSV headers as written by the benchmark CLI (its external interface).
SCHEMAS = {
    "timing": ["experiment", "K", "N", "rep", "method", "seconds", "index_agreement"],
    "capacity": [
        "experiment", "family", "K", "N", "J", "M", "trial", "retrieval_rate", "success",
    ],
    "mutable": ["experiment", "strategy", "M", "N", "trial", "step", "retrieval_rate"],
}

FIGURE_EXPERIMENT = {"fig1": "timing", "fig2": "capacity", "fig3": "mutable",
                     "fig4": "mutable"}

FAMILY_COLORS = {
    "normal": "tab:blue",
    "binary": "tab:orange",
    "sylvester": "tab:green",
    "krop": "tab:red",
}
STRATEGY_COLORS = {"krop": "tab:red", "sign": "tab:purple", "none": "tab:gray"}

plt.rcParams.update({
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 9,
})


class SchemaError(ValueError):
    """CSV header does not match the expected report schema."""


def load_frame(paths: list[str | Path], experiment: str) -> pd.DataFrame:
    expected = SCHEMAS[experiment]
    frames = []
    for path in paths:
        frame = pd.read_csv(path)
        got = list(frame.columns)
        if got != expected:
            missing = [c for c in expected if c not in got]
            unexpected = [c for c in got if c not in expected]
            raise SchemaError(
                f"{path}: header mismatch for {experiment} reports\n"
                f"  expected: {expected}\n"
                f"  got:      {got}\n"
                f"  missing: {missing or 'none'} unexpected: {unexpected or 'none'}"
            )
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def config_note(paths: list[str | Path]) -> str:
    """Short run identifier from sibling JSON reports, for embedding."""
    parts = []
    for path in paths:
        sibling = Path(path).with_suffix(".json")
        if not sibling.exists():
            parts.append(Path(path).name)
            continue
        try:
            config = json.loads(sibling.read_text())["config"]
        except (ValueError, KeyError):
            parts.append(Path(path).name)
            continue
        ks = config.get("k_values") or []
        span = f"K={min(ks)}..{max(ks)}" if ks else ""
        parts.append(f"seed={config.get('master_seed')} {span}".strip())
    return "; ".join(parts)


def _finish(fig, note: str):
    if note:
        fig.text(0.99, 0.01, note, ha="right", va="bottom", fontsize=7, color="0.4")
    return fig


def fig1(df: pd.DataFrame, note: str = ""):
    """Timing: gray per-repetition points, black mean curve per method."""
    df = df.dropna(subset=["seconds"])
    fig, ax = plt.subplots(figsize=(7, 4.5), layout="constrained")
    markers = {"direct": "o", "krop": "^"}
    lines = {"direct": "-", "krop": "--"}
    for method, group in df.groupby("method"):
        ax.semilogy(group["K"], group["seconds"], linestyle="none",
                    marker=markers.get(method, "."), markersize=3,
                    color="0.6", alpha=0.6)
        means = group.groupby("K")["seconds"].mean()
        ax.semilogy(means.index, means.values, lines.get(method, "-"),
                    color="black", marker=markers.get(method, "."),
                    label=f"{method} (mean)")
    ax.set_xlabel("K  (N = 2^K)")
    ax.set_ylabel("clean-up time [s]")
    ax.set_title("Clean-up running time: dense matrix-vector vs butterfly")
    ax.legend()
    return _finish(fig, note)


def _capacity_tables(df: pd.DataFrame):
    success = (
        df.groupby(["family", "K", "N", "J", "M"])["success"].mean().reset_index()
    )
    rows = []
    for (family, k), group in success.groupby(["family", "K"]):
        perfect = group.loc[group["success"] == 1.0, "M"]
        rows.append({
            "family": family,
            "K": k,
            "N": int(group["N"].iloc[0]),
            "capacity": int(perfect.max()) if not perfect.empty else 0,
        })
    return success, pd.DataFrame(rows)


def fig2(df: pd.DataFrame, note: str = ""):
    """Capacity: success-rate panels at two representative M + capacity panel."""
    success, capacity = _capacity_tables(df)
    coverage = success.groupby("M")["K"].nunique().sort_values(ascending=False)
    selected = sorted(coverage.index[:2].tolist())
    fig, axes = plt.subplots(
        1, len(selected) + 1, figsize=(4 * (len(selected) + 1), 4),
        layout="constrained",
    )
    axes = np.atleast_1d(axes)
    for ax, m in zip(axes, selected):
        sub = success[success["M"] == m]
        for family, group in sub.groupby("family"):
            group = group.sort_values("N")
            ax.plot(group["N"], group["success"], "o-",
                    color=FAMILY_COLORS.get(family, "black"), label=family)
        ax.set_xscale("log", base=2)
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("N")
        ax.set_ylabel("success rate")
        ax.set_title(f"M = {m}")
        ax.legend()
    ax = axes[-1]
    for family, group in capacity.groupby("family"):
        group = group.sort_values("N")
        ax.plot(group["N"], group["capacity"], "o-",
                color=FAMILY_COLORS.get(family, "black"), label=family)
    ax.set_xscale("log", base=2)
    ax.set_yscale("symlog", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel("memory capacity (largest perfect M)")
    ax.set_title("Capacity")
    ax.legend()
    return _finish(fig, note)


def fig3(df: pd.DataFrame, note: str = ""):
    """Mutable memory: mean retrieval rate per step, one panel per (M, N)."""
    cells = sorted(df.groupby(["M", "N"]).groups)
    fig, axes = plt.subplots(
        1, len(cells), figsize=(4.5 * len(cells), 4), layout="constrained",
        squeeze=False,
    )
    for ax, (m, n) in zip(axes[0], cells):
        sub = df[(df["M"] == m) & (df["N"] == n)]
        for strategy, group in sub.groupby("strategy"):
            means = group.groupby("step")["retrieval_rate"].mean()
            ax.plot(means.index, means.values, "o-", markersize=3,
                    color=STRATEGY_COLORS.get(strategy, "black"), label=strategy)
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("time-step")
        ax.set_ylabel("retrieval rate")
        ax.set_title(f"M = {m}, N = {n}")
        ax.legend()
    return _finish(fig, note)


def fig4(df: pd.DataFrame, note: str = ""):
    """Mutable memory: step-and-trial-averaged retrieval over the (M, N) grid."""
    means = (
        df.groupby(["strategy", "M", "N"])["retrieval_rate"].mean().reset_index()
    )
    ms = sorted(means["M"].unique())
    fig, axes = plt.subplots(
        1, len(ms), figsize=(4.5 * len(ms), 4), layout="constrained", squeeze=False,
    )
    for ax, m in zip(axes[0], ms):
        sub = means[means["M"] == m]
        for strategy, group in sub.groupby("strategy"):
            group = group.sort_values("N")
            ax.plot(group["N"], group["retrieval_rate"], "o-",
                    color=STRATEGY_COLORS.get(strategy, "black"), label=strategy)
        ax.set_xscale("log", base=2)
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("N")
        ax.set_ylabel("mean retrieval rate")
        ax.set_title(f"M = {m}")
        ax.legend()
    return _finish(fig, note)


BUILDERS = {"fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4}


def render(figure: str, inputs: list[str | Path], out: str | Path) -> None:
    experiment = FIGURE_EXPERIMENT[figure]
    frame = load_frame(inputs, experiment)
    note = config_note(inputs)
    fig = BUILDERS[figure](frame, note)
    fig.savefig(out, metadata={"Description": f"{figure}: {note}" if note else figure})
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot.py", description="Regenerate benchmark figures from CSV reports."
    )
    parser.add_argument("--figure", required=True, choices=sorted(BUILDERS),
                        help="which figure to render")
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        metavar="CSV", help="input report CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        render(args.figure, args.inputs, args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
