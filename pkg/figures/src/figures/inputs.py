"""Parsers for the published simulator output formats.

Only the file formats are shared with the simulator — a run directory
holds `manifest.json` (parameters + sha256 of each emitted file),
`series.csv` (observable time series), and `snapshot_t*.dat` grid
files; a sweep directory holds one run directory per parameter tuple
plus `summary.csv`. Nothing here imports from the simulator package.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FigureInputError

SERIES_COLUMNS = ("t", "norm", "x", "p", "x2", "p2", "xp", "H", "mu2", "mu4", "Wneg", "neg_area")
SUMMARY_COLUMNS = ("gamma", "Gamma", "kappa", "t_c", "max_Wneg", "status")


@dataclass(frozen=True)
class Snapshot:
    """One grid file: values indexed [x, p] plus its axes and time."""

    values: np.ndarray
    x: np.ndarray
    p: np.ndarray
    t: float

    @property
    def extent(self) -> tuple[float, float, float, float]:
        return (float(self.x[0]), float(self.x[-1]), float(self.p[0]), float(self.p[-1]))


def load_manifest(path: str | Path) -> tuple[dict, Path]:
    """Read a run manifest; returns (manifest, run directory)."""
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        manifest = json.loads(path.read_text())
    except FileNotFoundError:
        raise FigureInputError(f"{path}: no such manifest") from None
    except json.JSONDecodeError as exc:
        raise FigureInputError(f"{path}: not valid JSON ({exc})") from None
    if "files" not in manifest or "parameters" not in manifest:
        raise FigureInputError(f"{path}: missing 'files'/'parameters' keys")
    return manifest, path.parent


def load_series(path: str | Path) -> dict[str, np.ndarray]:
    """Read series.csv into column arrays keyed by header name."""
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != SERIES_COLUMNS:
                raise FigureInputError(
                    f"{path}: expected header {','.join(SERIES_COLUMNS)}, got {header}"
                )
            rows = [[float(v) for v in row] for row in reader if row]
    except FileNotFoundError:
        raise FigureInputError(f"{path}: no such series file") from None
    except ValueError as exc:
        raise FigureInputError(f"{path}: non-numeric series entry ({exc})") from None
    if not rows:
        raise FigureInputError(f"{path}: series has no samples")
    data = np.asarray(rows)
    return {name: data[:, i] for i, name in enumerate(SERIES_COLUMNS)}


def load_snapshot(path: str | Path) -> Snapshot:
    """Read a `# nx np xmin xmax pmin pmax t` header + row-major values."""
    path = Path(path)
    try:
        with open(path) as fh:
            header = fh.readline()
            if not header.startswith("#"):
                raise FigureInputError(f"{path}: missing snapshot header line")
            parts = header[1:].split()
            if len(parts) != 7:
                raise FigureInputError(f"{path}: malformed snapshot header {header!r}")
            nx, npts = int(parts[0]), int(parts[1])
            xmin, xmax, pmin, pmax, t = map(float, parts[2:7])
            values = np.loadtxt(fh)
    except FileNotFoundError:
        raise FigureInputError(f"{path}: no such snapshot") from None
    except ValueError as exc:
        raise FigureInputError(f"{path}: malformed snapshot body ({exc})") from None
    if values.size != nx * npts:
        raise FigureInputError(f"{path}: expected {nx * npts} values, got {values.size}")
    return Snapshot(
        values=values.reshape(nx, npts),
        x=np.linspace(xmin, xmax, nx),
        p=np.linspace(pmin, pmax, npts),
        t=t,
    )


def run_snapshots(manifest: dict, run_dir: Path) -> list[Snapshot]:
    """All snapshots named in the manifest, ordered by time."""
    names = sorted(n for n in manifest["files"] if n.startswith("snapshot_"))
    return sorted((load_snapshot(run_dir / n) for n in names), key=lambda s: s.t)


def load_summary(path: str | Path) -> list[dict]:
    """Read summary.csv; blank t_c fields become +inf (never classical)."""
    path = Path(path)
    if path.is_dir():
        path = path / "summary.csv"
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != SUMMARY_COLUMNS:
                raise FigureInputError(
                    f"{path}: expected header {','.join(SUMMARY_COLUMNS)}, got {header}"
                )
            rows = list(reader)
    except FileNotFoundError:
        raise FigureInputError(f"{path}: no such summary file") from None
    cells = []
    for row in rows:
        if not row:
            continue
        if len(row) != len(SUMMARY_COLUMNS):
            raise FigureInputError(f"{path}: malformed summary row {row}")
        gamma, gamma_gl, kappa, t_c, max_wneg, status = row
        try:
            cells.append(
                {
                    "gamma": float(gamma),
                    "Gamma": float(gamma_gl),
                    "kappa": float(kappa) if kappa else None,
                    "t_c": float(t_c) if t_c else math.inf,
                    "max_Wneg": float(max_wneg) if max_wneg else math.nan,
                    "status": status,
                }
            )
        except ValueError as exc:
            raise FigureInputError(f"{path}: non-numeric summary entry ({exc})") from None
    if not cells:
        raise FigureInputError(f"{path}: summary has no rows")
    return cells


def sweep_cell_series(summary_path: str | Path, cell: dict) -> dict[str, np.ndarray]:
    """The series.csv of one sweep cell, located by its directory name."""
    base = Path(summary_path)
    if not base.is_dir():
        base = base.parent
    parts = [f"gamma{cell['gamma']:g}", f"Gamma{cell['Gamma']:g}"]
    if cell["kappa"] is not None:
        parts.append(f"kappa{cell['kappa']:g}")
    return load_series(base / "_".join(parts) / "series.csv")
