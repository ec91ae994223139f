"""Figure rendering for phase-space simulator outputs."""

from .errors import FigureInputError, JobError
from .inputs import (
    Snapshot,
    load_manifest,
    load_series,
    load_snapshot,
    load_summary,
    run_snapshots,
    sweep_cell_series,
)
from .render import KINDS, FigureJob, render

__all__ = [
    "FigureInputError",
    "JobError",
    "Snapshot",
    "load_manifest",
    "load_series",
    "load_snapshot",
    "load_summary",
    "run_snapshots",
    "sweep_cell_series",
    "KINDS",
    "FigureJob",
    "render",
]
