"""Figure rendering for simulator outputs.

Four kinds, all driven by a `FigureJob`:

- ``heatmap-row``    one row of Wigner heatmaps, one per snapshot
- ``series-panel``   observable time-series panels from series.csv
- ``negativity-grid``log-negativity curves for every sweep cell
- ``sweep-heatmap``  t_c and max-negativity grids over (gamma, Gamma)

Heatmaps use a symmetric diverging scale so W = 0 maps to the center
color and negative regions are visibly distinct from positive ones.
Rendering is read-only over its inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import SymLogNorm

from .errors import FigureInputError, JobError
from .inputs import (
    load_manifest,
    load_series,
    load_summary,
    run_snapshots,
    sweep_cell_series,
)

KINDS = ("heatmap-row", "series-panel", "negativity-grid", "sweep-heatmap")
_DPI = 150


@dataclass(frozen=True)
class FigureJob:
    """Input path, figure kind, and styling for one render call."""

    manifest: Path  # run manifest for per-run kinds, sweep dir/summary.csv otherwise
    kind: str
    out_dir: Path
    cmap: str = "RdBu_r"  # diverging, centered at zero
    snapshot_times: tuple[float, ...] = field(default_factory=tuple)  # empty = all

    def __post_init__(self):
        if self.kind not in KINDS:
            raise JobError(f"unknown figure kind {self.kind!r}; choose from {', '.join(KINDS)}")
        object.__setattr__(self, "manifest", Path(self.manifest))
        object.__setattr__(self, "out_dir", Path(self.out_dir))


def render(job: FigureJob) -> list[Path]:
    """Render one job; returns the image paths written (possibly empty)."""
    job.out_dir.mkdir(parents=True, exist_ok=True)
    if job.kind == "heatmap-row":
        return _heatmap_row(job)
    if job.kind == "series-panel":
        return _series_panel(job)
    if job.kind == "negativity-grid":
        return _negativity_grid(job)
    return _sweep_heatmap(job)


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def _select_snapshots(job: FigureJob, snapshots):
    if not job.snapshot_times:
        return snapshots
    chosen = []
    for t in job.snapshot_times:
        match = min(snapshots, key=lambda s: abs(s.t - t))
        if abs(match.t - t) > 1e-9 + 1e-6 * max(1.0, abs(t)):
            raise JobError(f"no snapshot at t = {t:g} (have {[s.t for s in snapshots]})")
        chosen.append(match)
    return chosen


def _heatmap_row(job: FigureJob) -> list[Path]:
    manifest, run_dir = load_manifest(job.manifest)
    snapshots = _select_snapshots(job, run_snapshots(manifest, run_dir))
    if not snapshots:
        warnings.warn(f"{run_dir}: manifest lists no snapshots; nothing to render")
        return []
    vmax = max(float(np.abs(s.values).max()) for s in snapshots)
    # symmetric log keeps W = 0 at the center color while making weak
    # negative regions visibly blue next to a much taller positive peak
    norm = SymLogNorm(linthresh=0.01 * vmax, vmin=-vmax, vmax=vmax, base=10)
    fig, axes = plt.subplots(
        1, len(snapshots), figsize=(3.2 * len(snapshots), 3.0),
        sharey=True, squeeze=False,
    )
    for ax, snap in zip(axes[0], snapshots):
        # values are indexed [x, p]; transpose so x runs horizontally
        im = ax.imshow(
            snap.values.T, origin="lower", extent=snap.extent, aspect="auto",
            cmap=job.cmap, norm=norm,
        )
        ax.set_title(f"t = {snap.t:g}")
        ax.set_xlabel("x")
    axes[0][0].set_ylabel("p")
    fig.colorbar(im, ax=axes[0], label="W(x, p)", fraction=0.03, pad=0.02)
    return [_save(fig, job.out_dir / f"{manifest['name']}_heatmap_row.png")]


def _series_panel(job: FigureJob) -> list[Path]:
    manifest, run_dir = load_manifest(job.manifest)
    series = load_series(run_dir / "series.csv")
    t = series["t"]
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.0), sharex=True)
    panels = (
        ("Wneg", "log-negativity", axes[0][0]),
        ("neg_area", "negative area", axes[0][1]),
        ("H", "mean energy", axes[1][0]),
        ("norm", "total mass", axes[1][1]),
    )
    for column, label, ax in panels:
        ax.plot(t, series[column], lw=1.2)
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
    for ax in axes[1]:
        ax.set_xlabel("t")
    t_c = manifest.get("t_c")
    if t_c is not None:
        axes[0][0].axvline(t_c, color="k", ls="--", lw=0.8, label=f"$t_c$ = {t_c:.3g}")
        axes[0][0].legend(loc="best")
    fig.suptitle(manifest["name"])
    return [_save(fig, job.out_dir / f"{manifest['name']}_series_panel.png")]


def _negativity_grid(job: FigureJob) -> list[Path]:
    cells = load_summary(job.manifest)
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    drawn = 0
    for cell in cells:
        if cell["status"] != "ok":
            continue
        series = sweep_cell_series(job.manifest, cell)
        label = f"$\\gamma$={cell['gamma']:g}, $\\Gamma$={cell['Gamma']:g}"
        if cell["kappa"] is not None:
            label += f", $\\kappa$={cell['kappa']:g}"
        ax.plot(series["t"], series["Wneg"], lw=1.2, label=label)
        drawn += 1
    if drawn == 0:
        plt.close(fig)
        raise FigureInputError(f"{job.manifest}: no successful sweep cells to plot")
    ax.set_xlabel("t")
    ax.set_ylabel("log-negativity")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8, ncol=2)
    return [_save(fig, job.out_dir / "negativity_grid.png")]


def _sweep_heatmap(job: FigureJob) -> list[Path]:
    cells = load_summary(job.manifest)
    gammas = sorted({c["gamma"] for c in cells})
    gamma_gls = sorted({c["Gamma"] for c in cells})
    t_c = np.full((len(gamma_gls), len(gammas)), np.nan)
    wneg = np.full_like(t_c, np.nan)
    for cell in cells:
        i = gamma_gls.index(cell["Gamma"])
        j = gammas.index(cell["gamma"])
        t_c[i, j] = cell["t_c"]
        wneg[i, j] = cell["max_Wneg"]
    fig, (ax_tc, ax_w) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    finite = t_c[np.isfinite(t_c)]
    # never-classical cells (t_c = inf) render as the top of the scale
    ceil = float(finite.max()) if finite.size else 1.0
    shown = np.where(np.isinf(t_c), 1.25 * ceil if ceil > 0 else 1.0, t_c)
    for ax, data, title, cmap in (
        (ax_tc, shown, "$t_c$ (capped where never classical)", "viridis"),
        (ax_w, wneg, "max log-negativity", "magma"),
    ):
        im = ax.imshow(data, origin="lower", aspect="auto", cmap=cmap)
        ax.set_xticks(range(len(gammas)), [f"{g:g}" for g in gammas])
        ax.set_yticks(range(len(gamma_gls)), [f"{g:g}" for g in gamma_gls])
        ax.set_xlabel("$\\gamma$")
        ax.set_ylabel("$\\Gamma$")
        ax.set_title(title)
        fig.colorbar(im, ax=ax, fraction=0.046)
        for (i, j), val in np.ndenumerate(t_c if ax is ax_tc else wneg):
            text = "$\\infty$" if (ax is ax_tc and math.isinf(val)) else f"{val:.2g}"
            ax.text(j, i, text, ha="center", va="center", fontsize=8)
    fig.tight_layout()
    return [_save(fig, job.out_dir / "sweep_heatmap.png")]
