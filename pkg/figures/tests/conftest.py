import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synthio import make_run_dir, make_sweep_dir  # noqa: E402


@pytest.fixture
def run_dir(tmp_path):
    """A synthetic run directory: manifest + series + two snapshots."""
    return make_run_dir(tmp_path / "run")


@pytest.fixture
def sweep_dir(tmp_path):
    """A synthetic 2x2 sweep directory with per-cell runs and a summary."""
    return make_sweep_dir(tmp_path / "sweep")
