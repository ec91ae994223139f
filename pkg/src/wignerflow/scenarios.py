"""Configuration-driven scenario runner.

A scenario is: a Hamiltonian model, a generator specification, an
initial state, a grid, and a time horizon. Running one produces a
deterministic output directory containing `series.csv` (the observable
series), `snapshot_*.dat` grid files at requested times, and
`manifest.json` with the full parameter set and sha256 checksums of
every data file. Sweeps run one scenario per (gamma, Gamma, kappa)
tuple into per-tuple subdirectories plus a `summary.csv`.

Configs are TOML; unknown keys are hard errors. The environment
variable WIGNER_FLOW_OUTPUT_ROOT, when set, re-roots all relative
output directories.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .dynamics import GeneratorSpec, evolve, stable_dt
from .errors import ConfigurationError, InstabilityError
from .grid import PhaseGrid, save_snapshot
from .hamiltonian import HamiltonianModel
from .observables import classical_emergence_time
from .states import cat_state, gaussian_state

OUTPUT_ROOT_ENV = "WIGNER_FLOW_OUTPUT_ROOT"


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    hamiltonian: dict
    generator: dict
    state: dict
    grid: dict = field(default_factory=dict)
    dt: float = 1e-3
    t_max: float = 8.0
    record_every: int = 10
    snapshot_times: tuple[float, ...] = (0.0, 2.0, 8.0)
    output_dir: str = "out"
    sweep: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dt <= 0 or self.t_max < 0:
            raise ConfigurationError("dt must be > 0 and t_max >= 0")
        if self.record_every < 1:
            raise ConfigurationError("record_every must be >= 1")
        object.__setattr__(self, "snapshot_times", tuple(float(s) for s in self.snapshot_times))


_ALLOWED_KEYS = {
    "": {"name", "hamiltonian", "generator", "state", "grid", "dt", "t_max",
         "record_every", "snapshot_times", "output_dir", "sweep", "preset"},
    "hamiltonian": {"kind", "m", "omega", "a", "b", "kappa", "omega_d", "hbar"},
    "generator": {"advection", "gamma", "Gamma", "hbar2_correction", "renormalize_each_step"},
    "state": {"kind", "x0", "p0", "sigma_x", "sigma_p", "alpha", "phi"},
    "grid": {"nx", "np", "xmin", "xmax", "pmin", "pmax"},
    "sweep": {"gamma", "Gamma", "kappa"},
}


def _check_keys(table: dict, section: str) -> None:
    allowed = _ALLOWED_KEYS[section]
    for key in table:
        if key not in allowed:
            where = f"[{section}]" if section else "top level"
            raise ConfigurationError(f"unknown key {key!r} at {where}")


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    return config_from_dict(raw, default_name=path.stem)


def config_from_dict(raw: dict, default_name: str = "scenario") -> ScenarioConfig:
    raw = dict(raw)
    preset_name = raw.pop("preset", None)
    base: dict = {}
    if preset_name is not None:
        if preset_name not in PRESETS:
            known = ", ".join(sorted(PRESETS))
            raise ConfigurationError(f"unknown preset {preset_name!r} (known: {known})")
        base = dataclasses.asdict(PRESETS[preset_name])
    _check_keys(raw, "")
    for section in ("hamiltonian", "generator", "state", "grid", "sweep"):
        sub = raw.get(section)
        if sub is not None:
            if not isinstance(sub, dict):
                raise ConfigurationError(f"[{section}] must be a table")
            _check_keys(sub, section)
            base[section] = {**base.get(section, {}), **sub}
    for key in ("name", "dt", "t_max", "record_every", "snapshot_times", "output_dir"):
        if key in raw:
            base[key] = raw[key]
    base.setdefault("name", default_name)
    for section in ("hamiltonian", "generator", "state"):
        if section not in base:
            raise ConfigurationError(f"missing [{section}] table (or preset)")
    try:
        return ScenarioConfig(**base)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def build_model(config: ScenarioConfig) -> HamiltonianModel:
    params = dict(config.hamiltonian)
    kind = params.pop("kind", "sho")
    builders = {
        "sho": (HamiltonianModel.sho, {"m": 1.0, "omega": 1.0, "hbar": 1.0}),
        "driven_anharmonic": (
            HamiltonianModel.driven_anharmonic,
            {"m": 1.0, "a": 1.0, "b": 0.1, "kappa": 0.0, "omega_d": 1.0, "hbar": 1.0},
        ),
    }
    if kind not in builders:
        raise ConfigurationError(f"unknown hamiltonian kind {kind!r}")
    builder, defaults = builders[kind]
    extra = set(params) - set(defaults)
    if extra:
        raise ConfigurationError(f"hamiltonian keys {sorted(extra)} do not apply to kind {kind!r}")
    return builder(**{**defaults, **params})


def build_grid(config: ScenarioConfig) -> PhaseGrid:
    g = dict(config.grid)
    return PhaseGrid(
        nx=g.get("nx", 256), np=g.get("np", 256),
        xmin=g.get("xmin", -6.0), xmax=g.get("xmax", 6.0),
        pmin=g.get("pmin", -6.0), pmax=g.get("pmax", 6.0),
    )


def build_state(config: ScenarioConfig, grid: PhaseGrid):
    params = dict(config.state)
    kind = params.pop("kind", "gaussian")
    if kind == "gaussian":
        return gaussian_state(
            x0=params.pop("x0", 0.0), p0=params.pop("p0", 0.0),
            sigma_x=params.pop("sigma_x", 0.5), sigma_p=params.pop("sigma_p", 0.5),
            grid=grid,
        )
    if kind == "cat":
        return cat_state(alpha=params.pop("alpha", 2.0), phi=params.pop("phi", 0.0), grid=grid)
    raise ConfigurationError(f"unknown state kind {kind!r}")


def build_generator(config: ScenarioConfig) -> GeneratorSpec:
    g = dict(config.generator)
    return GeneratorSpec(
        advection=g.get("advection", True),
        gamma=g.get("gamma", 0.0),
        Gamma=g.get("Gamma", 0.0),
        hbar2_correction=g.get("hbar2_correction", False),
        renormalize_each_step=g.get("renormalize_each_step", False),
    )


def resolve_output_dir(config: ScenarioConfig) -> Path:
    out = Path(config.output_dir)
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root and not out.is_absolute():
        out = Path(root) / out
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _manifest_params(config: ScenarioConfig) -> dict:
    params = dataclasses.asdict(config)
    params.pop("output_dir")  # keep manifests location-independent
    return params


def run_scenario(config: ScenarioConfig, out_dir: Path | None = None) -> dict:
    """Run one scenario; returns the manifest dictionary."""
    if out_dir is None:
        out_dir = resolve_output_dir(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = build_model(config)
    grid = build_grid(config)
    spec = build_generator(config)
    w0 = build_state(config, grid)
    limit = stable_dt(spec, model, grid, safety=1.0)
    if config.dt > limit:
        raise ConfigurationError(
            f"dt = {config.dt:g} exceeds the RK4 stability boundary {limit:.3e} "
            "for this grid and generator"
        )
    files: dict[str, str] = {}

    def on_snapshot(t, w):
        fname = f"snapshot_t{t:g}.dat"
        save_snapshot(w, t, out_dir / fname)
        files[fname] = _sha256(out_dir / fname)

    series = evolve(
        spec, model, w0, config.t_max, config.dt,
        record_every=config.record_every,
        snapshot_times=config.snapshot_times,
        on_snapshot=on_snapshot,
    )
    series_path = out_dir / "series.csv"
    series.to_csv(series_path)
    files["series.csv"] = _sha256(series_path)
    manifest = {
        "name": config.name,
        "parameters": _manifest_params(config),
        "t_c": classical_emergence_time(series),
        "max_Wneg": max(series.column("Wneg")),
        "files": files,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _cell_name(gamma: float, gamma_gl: float, kappa: float | None) -> str:
    parts = [f"gamma{gamma:g}", f"Gamma{gamma_gl:g}"]
    if kappa is not None:
        parts.append(f"kappa{kappa:g}")
    return "_".join(parts)


def run_sweep(config: ScenarioConfig, out_dir: Path | None = None) -> Path:
    """Run the (gamma, Gamma, kappa) grid; returns the summary CSV path.

    Per-cell failures are recorded in the summary (status column) and
    the sweep continues.
    """
    sweep = dict(config.sweep)
    gammas = sweep.get("gamma") or [config.generator.get("gamma", 0.0)]
    gamma_gls = sweep.get("Gamma") or [config.generator.get("Gamma", 0.0)]
    kappas = sweep.get("kappa")
    if not config.sweep or not any(config.sweep.values()):
        raise ConfigurationError("sweep requires at least one nonempty parameter list")
    if out_dir is None:
        out_dir = resolve_output_dir(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for gamma in gammas:
        for gamma_gl in gamma_gls:
            for kappa in kappas if kappas else [None]:
                generator = {**config.generator, "gamma": gamma, "Gamma": gamma_gl}
                hamiltonian = dict(config.hamiltonian)
                if kappa is not None:
                    hamiltonian["kappa"] = kappa
                cell = dataclasses.replace(
                    config, generator=generator, hamiltonian=hamiltonian, sweep={}
                )
                cell_dir = out_dir / _cell_name(gamma, gamma_gl, kappa)
                try:
                    manifest = run_scenario(cell, out_dir=cell_dir)
                    t_c = manifest["t_c"]
                    rows.append((gamma, gamma_gl, kappa, t_c, manifest["max_Wneg"], "ok"))
                except (ConfigurationError, InstabilityError) as exc:
                    print(f"sweep cell {cell_dir.name} failed: {exc}", file=sys.stderr)
                    rows.append((gamma, gamma_gl, kappa, None, None, "failed"))
    summary = out_dir / "summary.csv"
    with open(summary, "w") as fh:
        fh.write("gamma,Gamma,kappa,t_c,max_Wneg,status\n")
        for gamma, gamma_gl, kappa, t_c, wneg, status in rows:
            fh.write(
                f"{gamma:.17g},{gamma_gl:.17g},"
                + ("" if kappa is None else f"{kappa:.17g}")
                + ","
                + ("" if t_c is None else f"{t_c:.17g}")
                + ","
                + ("" if wneg is None else f"{wneg:.17g}")
                + f",{status}\n"
            )
    return summary


# ---------------------------------------------------------------------------
# Presets
#
# The published heatmap scenarios label both rows "0.3"; whether that is
# the dephasing rate gamma or the gain/loss strength Gamma is ambiguous
# in the source convention, so both knobs are explicit here (see README).
# Snapshot times are artifact choices, not published values.

PRESETS: dict[str, ScenarioConfig] = {
    "sho-dephasing": ScenarioConfig(
        name="sho-dephasing",
        hamiltonian={"kind": "sho", "m": 1.0, "omega": 1.0},
        generator={"gamma": 0.3},
        state={"kind": "gaussian", "x0": 1.0, "p0": 1.0, "sigma_x": 0.5, "sigma_p": 0.5},
        # the double-Poisson term's RK4 stability boundary at 256^2 with
        # gamma = 0.3 is ~7.6e-5; the nominal 1e-3 step blows up
        dt=6.25e-5,
        output_dir="out/sho-dephasing",
    ),
    "sho-gainloss": ScenarioConfig(
        name="sho-gainloss",
        hamiltonian={"kind": "sho", "m": 1.0, "omega": 1.0},
        generator={"Gamma": 0.3},
        state={"kind": "gaussian", "x0": 1.0, "p0": 1.0, "sigma_x": 0.5, "sigma_p": 0.5},
        output_dir="out/sho-gainloss",
    ),
    "anharmonic-gaussian": ScenarioConfig(
        name="anharmonic-gaussian",
        hamiltonian={
            "kind": "driven_anharmonic",
            "m": 1.0, "a": 1.0, "b": 0.1, "kappa": 0.2, "omega_d": 1.0,
        },
        generator={"gamma": 0.1, "Gamma": 0.0, "hbar2_correction": True},
        # minimum-uncertainty wavepacket: sigma_x = sigma_p = 1/sqrt(2) at hbar = 1
        state={"kind": "gaussian", "x0": 2.19, "p0": 0.0,
               "sigma_x": 0.7071067811865476, "sigma_p": 0.7071067811865476},
        grid={"nx": 256, "np": 256, "xmin": -4.0, "xmax": 4.0, "pmin": -6.0, "pmax": 6.0},
        dt=3.2e-5,  # RK4 boundary for this generator/grid is ~4.6e-5
        t_max=3.0,
        snapshot_times=(0.0, 1.5, 3.0),
        output_dir="out/anharmonic-gaussian",
    ),
    "anharmonic-cat": ScenarioConfig(
        name="anharmonic-cat",
        hamiltonian={
            "kind": "driven_anharmonic",
            "m": 1.0, "a": 1.0, "b": 0.1, "kappa": 0.2, "omega_d": 1.0,
        },
        generator={"gamma": 0.05, "Gamma": 0.1, "hbar2_correction": True},
        state={"kind": "cat", "alpha": 2.0, "phi": 0.0},
        grid={"nx": 256, "np": 256, "xmin": -4.0, "xmax": 4.0, "pmin": -6.0, "pmax": 6.0},
        dt=6.25e-5,  # RK4 boundary for this generator/grid is ~9.1e-5
        t_max=3.0,
        snapshot_times=(0.0, 1.5, 3.0),
        output_dir="out/anharmonic-cat",
    ),
}
