"""Figure scripts over real CLI-produced reports."""

import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

import plot


def mean_curves(fig):
    return [
        line for ax in fig.axes for line in ax.get_lines()
        if str(line.get_label()).endswith("(mean)")
    ]


class TestFig1:
    def test_renders_with_two_mean_curves(self, report_dir, tmp_path):
        out = tmp_path / "fig1.png"
        assert plot.main(["--figure", "fig1", "--in", str(report_dir / "timing.csv"),
                          "--out", str(out)]) == 0
        assert out.stat().st_size > 0
        frame = plot.load_frame([report_dir / "timing.csv"], "timing")
        fig = plot.fig1(frame)
        assert len(mean_curves(fig)) == 2

    def test_embeds_run_note(self, report_dir):
        note = plot.config_note([report_dir / "timing.csv"])
        assert "seed=5" in note and "K=1..6" in note


class TestFig2:
    def test_renders(self, report_dir, tmp_path):
        out = tmp_path / "fig2.png"
        assert plot.main(["--figure", "fig2", "--in",
                          str(report_dir / "capacity.csv"), "--out", str(out)]) == 0
        assert out.stat().st_size > 0

    def test_one_capacity_curve_per_family(self, report_dir):
        frame = plot.load_frame([report_dir / "capacity.csv"], "capacity")
        fig = plot.fig2(frame)
        labels = [line.get_label() for line in fig.axes[-1].get_lines()]
        assert sorted(labels) == ["binary", "krop", "normal", "sylvester"]

    def test_single_family_subset(self, report_dir, tmp_path):
        frame = plot.load_frame([report_dir / "capacity.csv"], "capacity")
        krop_only = frame[frame["family"] == "krop"]
        csv_path = tmp_path / "krop-only.csv"
        krop_only.to_csv(csv_path, index=False)
        fig = plot.fig2(plot.load_frame([csv_path], "capacity"))
        labels = [line.get_label() for line in fig.axes[-1].get_lines()]
        assert labels == ["krop"]

    def test_missing_column_is_schema_error(self, report_dir, tmp_path, capsys):
        frame = pd.read_csv(report_dir / "capacity.csv").drop(columns=["success"])
        broken = tmp_path / "broken.csv"
        frame.to_csv(broken, index=False)
        rc = plot.main(["--figure", "fig2", "--in", str(broken),
                        "--out", str(tmp_path / "x.png")])
        assert rc == 2
        err = capsys.readouterr().err
        assert "success" in err and "missing" in err


class TestFig3And4:
    @pytest.mark.parametrize("figure", ["fig3", "fig4"])
    def test_renders(self, figure, report_dir, tmp_path):
        out = tmp_path / f"{figure}.png"
        assert plot.main(["--figure", figure, "--in",
                          str(report_dir / "mutable.csv"), "--out", str(out)]) == 0
        assert out.stat().st_size > 0

    def test_fig3_one_panel_per_cell(self, report_dir):
        frame = plot.load_frame([report_dir / "mutable.csv"], "mutable")
        fig = plot.fig3(frame)
        assert len(fig.axes) == 2  # pairs 4:64 and 8:256


class TestCliBehavior:
    def test_deterministic_output_bytes(self, report_dir, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            assert plot.main(["--figure", "fig1", "--in",
                              str(report_dir / "timing.csv"), "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_inputs_left_untouched(self, report_dir, tmp_path):
        path = report_dir / "mutable.csv"
        before = path.read_bytes()
        plot.main(["--figure", "fig4", "--in", str(path),
                   "--out", str(tmp_path / "f.png")])
        assert path.read_bytes() == before

    def test_wrong_experiment_csv_rejected(self, report_dir, tmp_path):
        rc = plot.main(["--figure", "fig1", "--in",
                        str(report_dir / "capacity.csv"),
                        "--out", str(tmp_path / "x.png")])
        assert rc == 2

    def test_missing_file(self, tmp_path):
        rc = plot.main(["--figure", "fig1", "--in", str(tmp_path / "nope.csv"),
                        "--out", str(tmp_path / "x.png")])
        assert rc == 2

    def test_script_entry_point(self, report_dir, tmp_path):
        script = Path(plot.__file__)
        out = tmp_path / "fig1.png"
        proc = subprocess.run(
            [sys.executable, str(script), "--figure", "fig1", "--in",
             str(report_dir / "timing.csv"), "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert out.exists()
