import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))


@pytest.fixture(scope="session")
def report_dir(tmp_path_factory):
    """Desk-scale CSV/JSON reports produced through the benchmark CLI."""
    out = tmp_path_factory.mktemp("reports")
    commands = [
        ["krop", "timing", "--k-max", "6", "--reps", "3", "--warmup", "1",
         "--seed", "5", "--out", str(out)],
        ["krop", "capacity", "--k", "4..6", "--trials", "3", "--seed", "5",
         "--out", str(out)],
        ["krop", "mutable", "--pairs", "4:64,8:256", "--trials", "2",
         "--steps", "6", "--seed", "5", "--out", str(out)],
    ]
    for command in commands:
        subprocess.run(command, check=True, capture_output=True, text=True)
    return out
