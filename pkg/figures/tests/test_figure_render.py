"""Rendering behavior: outputs exist, reruns match, scale is zero-centered."""

import json

import numpy as np
import pytest
from PIL import Image

from figures import FigureInputError, FigureJob, JobError, render


def _render(manifest, kind, out, **kw):
    return render(FigureJob(manifest=manifest, kind=kind, out_dir=out, **kw))


class TestJobValidation:
    def test_unknown_kind_rejected(self, run_dir, tmp_path):
        with pytest.raises(JobError, match="unknown figure kind"):
            FigureJob(manifest=run_dir, kind="pie-chart", out_dir=tmp_path)

    def test_unmatched_snapshot_time_rejected(self, run_dir, tmp_path):
        with pytest.raises(JobError, match="no snapshot at t = 7"):
            _render(run_dir, "heatmap-row", tmp_path / "o", snapshot_times=(7.0,))


class TestHeatmapRow:
    def test_writes_one_panel_per_snapshot(self, run_dir, tmp_path):
        (out,) = _render(run_dir, "heatmap-row", tmp_path / "o")
        assert out.name == "synthetic_heatmap_row.png"
        assert out.stat().st_size > 0

    def test_snapshot_selection(self, run_dir, tmp_path):
        (out,) = _render(run_dir, "heatmap-row", tmp_path / "o", snapshot_times=(1.0,))
        assert out.exists()

    def test_negative_regions_visibly_distinct(self, run_dir, tmp_path):
        """With a diverging zero-centered scale the two lobes get opposite
        hues: the image must contain both red-dominant and blue-dominant
        pixels well away from the neutral center color."""
        (out,) = _render(run_dir, "heatmap-row", tmp_path / "o")
        rgb = np.asarray(Image.open(out).convert("RGB"), dtype=float)
        r, b = rgb[..., 0], rgb[..., 2]
        assert ((r - b) > 60).any(), "no clearly positive-colored region"
        assert ((b - r) > 60).any(), "no clearly negative-colored region"

    def test_empty_snapshot_list_is_noop_with_warning(self, run_dir, tmp_path):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        manifest["files"] = {"series.csv": manifest["files"]["series.csv"]}
        (run_dir / "manifest.json").write_text(json.dumps(manifest))
        with pytest.warns(UserWarning, match="no snapshots"):
            written = _render(run_dir, "heatmap-row", tmp_path / "o")
        assert written == []

    def test_rerender_is_byte_identical(self, run_dir, tmp_path):
        (a,) = _render(run_dir, "heatmap-row", tmp_path / "a")
        (b,) = _render(run_dir, "heatmap-row", tmp_path / "b")
        assert a.read_bytes() == b.read_bytes()


class TestSeriesPanel:
    def test_writes_panel(self, run_dir, tmp_path):
        (out,) = _render(run_dir, "series-panel", tmp_path / "o")
        assert out.name == "synthetic_series_panel.png"
        assert out.stat().st_size > 0

    def test_renders_without_tc(self, run_dir, tmp_path):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        manifest["t_c"] = None
        (run_dir / "manifest.json").write_text(json.dumps(manifest))
        (out,) = _render(run_dir, "series-panel", tmp_path / "o")
        assert out.exists()


class TestSweepKinds:
    def test_negativity_grid(self, sweep_dir, tmp_path):
        (out,) = _render(sweep_dir, "negativity-grid", tmp_path / "o")
        assert out.name == "negativity_grid.png"

    def test_negativity_grid_needs_ok_cells(self, sweep_dir, tmp_path):
        summary = sweep_dir / "summary.csv"
        summary.write_text(summary.read_text().replace(",ok", ",failed"))
        with pytest.raises(FigureInputError, match="no successful"):
            _render(sweep_dir, "negativity-grid", tmp_path / "o")

    def test_sweep_heatmap(self, sweep_dir, tmp_path):
        (out,) = _render(sweep_dir, "sweep-heatmap", tmp_path / "o")
        assert out.name == "sweep_heatmap.png"
        assert out.stat().st_size > 0

    def test_accepts_summary_path(self, sweep_dir, tmp_path):
        (out,) = _render(sweep_dir / "summary.csv", "sweep-heatmap", tmp_path / "o")
        assert out.exists()
