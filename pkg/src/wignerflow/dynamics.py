"""Bracket operators, RHS assembly, and explicit RK4 time stepping.

Sign convention, used everywhere: H Lambda W = dH/dx dW/dp - dH/dp dW/dx,
so the advection term is {H,W}_P = V'(x) dW/dp - (p/m) dW/dx and the
classical dephasing equation is dW/dt = {H,W}_P + gamma {H,{H,W}_P}_P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConfigurationError,
    ContractViolationError,
    InstabilityError,
    UnsupportedOrderError,
)
from .grid import PhaseGrid, WignerField, diff_axis, integrate_values, pairwise_sum
from .hamiltonian import HamiltonianModel
from .observables import ObservableSeries, record_observables


@dataclass(frozen=True)
class FilterSpec:
    """Truncated even-Taylor filter G, applied at rate chi_dot(t).

    even_taylor_coeffs[n] = G^(2n)(0) / (2n)! for n = 0..N_max.
    """

    even_taylor_coeffs: tuple[float, ...]
    chi_dot: Callable[[float], float]
    variant: str  # "commutator" | "anticommutator"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.even_taylor_coeffs)
        object.__setattr__(self, "even_taylor_coeffs", coeffs)
        if len(coeffs) < 2:
            raise ConfigurationError("filter needs coefficients up to at least n = 1")
        if not all(math.isfinite(c) for c in coeffs):
            raise ConfigurationError("filter coefficients must be finite")
        if self.variant not in ("commutator", "anticommutator"):
            raise ConfigurationError(f"unknown filter variant {self.variant!r}")


@dataclass(frozen=True)
class GeneratorSpec:
    """Which terms enter dW/dt.

    gamma is the classical dephasing rate (gamma = lambda/2 in the
    fluctuating-Hamiltonian identification); Gamma is the balanced
    gain/loss strength of the double-anticommutator term.
    """

    advection: bool = True
    gamma: float = 0.0
    Gamma: float = 0.0
    hbar2_correction: bool = False
    filter: Optional[FilterSpec] = None
    renormalize_each_step: bool = False

    def __post_init__(self):
        if self.gamma < 0 or self.Gamma < 0:
            raise ConfigurationError("rates gamma, Gamma must be >= 0")
        if not (
            self.advection
            or self.gamma > 0
            or self.Gamma > 0
            or self.hbar2_correction
            or self.filter is not None
        ):
            raise ConfigurationError("GeneratorSpec enables no terms")


class _Workspace:
    """Grid-sampled model arrays reused across RHS evaluations."""

    def __init__(self, model: HamiltonianModel, grid: PhaseGrid):
        self.grid = grid
        self.xm, self.pm = grid.meshes()
        self.dv1 = model.dv(self.xm, 1)
        self.dv3 = model.dv(self.xm, 3)
        self.p_over_m = self.pm / model.m
        self.h_static = model.hamiltonian(self.xm, self.pm, 0.0) - (
            model.drive_force(0.0) * self.xm if model.drive else 0.0
        )
        self.weights = grid.trapezoid_weights()

    def hamiltonian(self, model: HamiltonianModel, t: float) -> np.ndarray:
        if model.drive is None:
            return self.h_static
        return self.h_static + model.drive_force(t) * self.xm


@lru_cache(maxsize=16)
def _workspace(model: HamiltonianModel, grid: PhaseGrid) -> _Workspace:
    return _Workspace(model, grid)


def _poisson_values(ws: _Workspace, model, values, t: float) -> np.ndarray:
    # zero extension: W decays at the boundary, and the skew-symmetric
    # closure keeps nested applications of the transport operator from
    # feeding an edge instability (one-sided closures do, at rate ~ gamma F^2)
    dwdp = diff_axis(values, ws.grid.dp, 1, 1, boundary="zero")
    dwdx = diff_axis(values, ws.grid.dx, 0, 1, boundary="zero")
    force = ws.dv1 + model.drive_force(t) if model.drive else ws.dv1
    return force * dwdp - ws.p_over_m * dwdx


def poisson_bracket(model: HamiltonianModel, w: WignerField, t: float = 0.0) -> WignerField:
    """{H, W}_P with analytic H derivatives and discrete W derivatives."""
    ws = _workspace(model, w.grid)
    return w.with_values(_poisson_values(ws, model, w.values, t))


def nested_poisson(model: HamiltonianModel, w: WignerField, n: int, t: float = 0.0) -> WignerField:
    """n-fold nested Poisson bracket {H, .}_P^n."""
    if n < 1:
        raise UnsupportedOrderError("nested order must be >= 1")
    if n > 4:
        raise UnsupportedOrderError("nested Poisson brackets supported up to order 4")
    ws = _workspace(model, w.grid)
    values = w.values
    for _ in range(n):
        values = _poisson_values(ws, model, values, t)
    return w.with_values(values)


def _gainloss_values(ws: _Workspace, model, values, t: float, gamma_gl: float) -> np.ndarray:
    h = ws.hamiltonian(model, t)
    h2 = h * h
    norm = pairwise_sum(values * ws.weights)
    mean_h2 = pairwise_sum(h2 * values * ws.weights) / norm
    return -4.0 * gamma_gl * (h2 - mean_h2) * values


def gainloss_term(model: HamiltonianModel, w: WignerField, gamma_gl: float, t: float = 0.0) -> WignerField:
    """Balanced gain/loss term -4*Gamma*(H^2 - <H^2>)*W; integrates to zero."""
    ws = _workspace(model, w.grid)
    norm = pairwise_sum(w.values * ws.weights)
    if abs(norm - 1.0) > 1e-6:
        raise ContractViolationError(f"gainloss_term needs a normalized field, got norm {norm}")
    return w.with_values(_gainloss_values(ws, model, w.values, t, gamma_gl))


def hbar2_moyal_correction(model: HamiltonianModel, w: WignerField, hbar: float | None = None) -> WignerField:
    """Leading Moyal correction -(hbar^2/24) V'''(x) d^3W/dp^3.

    Exact for polynomial V of degree <= 4, where the Lambda^3 expansion
    collapses to the single V''' term (quadratic V gives zero).
    """
    if len(model.potential) > 5:
        raise ConfigurationError("hbar^2 correction implemented for deg(V) <= 4")
    if hbar is None:
        hbar = model.hbar
    ws = _workspace(model, w.grid)
    d3w = diff_axis(w.values, w.grid.dp, 1, 3, boundary="zero")
    return w.with_values(-(hbar**2) / 24.0 * ws.dv3 * d3w)


def hbar2_correction_general(model: HamiltonianModel, w: WignerField, t: float = 0.0, hbar: float | None = None) -> WignerField:
    """Same correction via the full discrete Lambda^3 expansion of H.

    H is sampled on the grid and differentiated with the same stencils
    as W; serves as the independent route for the V''' shortcut.
    """
    if hbar is None:
        hbar = model.hbar
    g = w.grid
    ws = _workspace(model, g)
    h = ws.hamiltonian(model, t)
    hx3 = diff_axis(h, g.dx, 0, 3)
    hp3 = diff_axis(h, g.dp, 1, 3)
    hx2p = diff_axis(diff_axis(h, g.dx, 0, 2), g.dp, 1, 1)
    hxp2 = diff_axis(diff_axis(h, g.dx, 0, 1), g.dp, 1, 2)
    wx3 = diff_axis(w.values, g.dx, 0, 3, boundary="zero")
    wp3 = diff_axis(w.values, g.dp, 1, 3, boundary="zero")
    wxp2 = diff_axis(diff_axis(w.values, g.dx, 0, 1, boundary="zero"), g.dp, 1, 2, boundary="zero")
    wx2p = diff_axis(diff_axis(w.values, g.dx, 0, 2, boundary="zero"), g.dp, 1, 1, boundary="zero")
    lam3 = hx3 * wp3 - hp3 * wx3 - 3.0 * hx2p * wxp2 + 3.0 * hxp2 * wx2p
    return w.with_values(-(hbar**2) / 24.0 * lam3)


def _filter_values(ws: _Workspace, model, spec: FilterSpec, values, t: float) -> np.ndarray:
    rate = spec.chi_dot(t)
    coeffs = spec.even_taylor_coeffs
    out = np.zeros_like(values)
    if spec.variant == "commutator":
        if 2 * (len(coeffs) - 1) > 4:
            raise UnsupportedOrderError(
                "classical commutator filter limited to nested order 4 (N_max = 2)"
            )
        nested = values
        out += coeffs[0] * values
        for n in range(1, len(coeffs)):
            nested = _poisson_values(ws, model, nested, t)
            nested = _poisson_values(ws, model, nested, t)
            out += coeffs[n] * nested
    else:
        h = ws.hamiltonian(model, t)
        norm = pairwise_sum(values * ws.weights)
        for n, c in enumerate(coeffs):
            if c == 0.0:
                continue
            h2n = h ** (2 * n)
            mean = pairwise_sum(h2n * values * ws.weights) / norm
            out += c * 4.0**n * (h2n - mean) * values
    return rate * out


def _rhs_values(spec: GeneratorSpec, model, ws: _Workspace, values, t: float) -> np.ndarray:
    out = np.zeros_like(values)
    if spec.advection or spec.gamma > 0:
        pb = _poisson_values(ws, model, values, t)
        if spec.advection:
            out += pb
        if spec.gamma > 0:
            out += spec.gamma * _poisson_values(ws, model, pb, t)
    if spec.Gamma > 0:
        out += _gainloss_values(ws, model, values, t, spec.Gamma)
    if spec.hbar2_correction and model.hbar > 0:
        d3w = diff_axis(values, ws.grid.dp, 1, 3, boundary="zero")
        out += -(model.hbar**2) / 24.0 * ws.dv3 * d3w
    if spec.filter is not None:
        out += _filter_values(ws, model, spec.filter, values, t)
    return out


def assemble_rhs(spec: GeneratorSpec, model: HamiltonianModel, w: WignerField, t: float = 0.0) -> WignerField:
    """Sum of the enabled generator terms evaluated at time t."""
    ws = _workspace(model, w.grid)
    return w.with_values(_rhs_values(spec, model, ws, w.values, t))


def _step_values(spec, model, ws, values, t, dt):
    k1 = _rhs_values(spec, model, ws, values, t)
    k2 = _rhs_values(spec, model, ws, values + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = _rhs_values(spec, model, ws, values + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = _rhs_values(spec, model, ws, values + dt * k3, t + dt)
    out = values + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    if spec.renormalize_each_step:
        out = out / pairwise_sum(out * ws.weights)
    return out


def step_rk4(spec: GeneratorSpec, model: HamiltonianModel, w: WignerField, t: float, dt: float) -> WignerField:
    """One classical RK4 step; <H^2> is recomputed at every stage."""
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    ws = _workspace(model, w.grid)
    out = _step_values(spec, model, ws, w.values, t, dt)
    if not np.isfinite(out).all():
        raise InstabilityError(t, dt)
    return w.with_values(out)


def evolve(
    spec: GeneratorSpec,
    model: HamiltonianModel,
    w0: WignerField,
    t_max: float,
    dt: float,
    record_every: int = 1,
    snapshot_times: tuple[float, ...] = (),
    on_snapshot: Callable[[float, WignerField], None] | None = None,
    on_record: Callable[[float, WignerField], None] | None = None,
) -> ObservableSeries:
    """Fixed-step evolution with periodic observable records and snapshots."""
    ws = _workspace(model, w0.grid)
    n_steps = int(round(t_max / dt)) if t_max > 0 else 0
    snap_steps = {int(round(ts / dt)): ts for ts in snapshot_times}
    series = ObservableSeries()

    def _record(t, values):
        field = w0.with_values(values)
        series.append(t, record_observables(model, field, t))
        if on_record is not None:
            on_record(t, field)

    values = w0.values
    _record(0.0, values)
    if 0 in snap_steps and on_snapshot is not None:
        on_snapshot(0.0, w0)
    for step in range(1, n_steps + 1):
        t_prev = (step - 1) * dt
        values = _step_values(spec, model, ws, values, t_prev, dt)
        if not np.isfinite(values).all():
            raise InstabilityError(t_prev + dt, dt)
        t = step * dt
        if step % record_every == 0 or step == n_steps:
            _record(t, values)
        if step in snap_steps and on_snapshot is not None:
            on_snapshot(t, w0.with_values(values))
    return series


def _max_symbol(weights: np.ndarray, offsets: np.ndarray) -> float:
    theta = np.linspace(0.0, math.pi, 2001)
    sym = np.abs(np.exp(1j * np.outer(theta, offsets)) @ weights)
    return float(sym.max())


@lru_cache(maxsize=None)
def _stencil_symbol(order: int) -> float:
    from .grid import stencil_weights

    hw = {1: 2, 2: 2, 3: 3}[order]
    offs = np.arange(-hw, hw + 1)
    return _max_symbol(stencil_weights(tuple(offs), order), offs)


def stable_dt(spec: GeneratorSpec, model: HamiltonianModel, grid: PhaseGrid, safety: float = 0.4) -> float:
    """Heuristic RK4 stability bound for the enabled terms.

    Frozen-coefficient analysis at the stiffest grid point. The binding
    term in dephasing runs is the double-Poisson "diffusion along the
    flow": its spectral radius is gamma (F_max s1/dp + v_max s1/dx)^2,
    which shrinks quadratically with the spacing — far below naive CFL.
    `safety` multiplies the computed boundary (1.0 = marginal).
    """
    x = grid.x
    v_max = max(abs(grid.pmin), abs(grid.pmax)) / model.m
    kappa = abs(model.drive[0]) if model.drive else 0.0
    f_max = float(np.abs(model.dv(x, 1)).max()) + kappa
    s1, s3 = _stencil_symbol(1), _stencil_symbol(3)
    flow_speed = s1 * (f_max / grid.dp + v_max / grid.dx)
    bounds = []
    if spec.advection or spec.filter is not None:
        # RK4 imaginary-axis limit ~2.82 for the pure advection symbol
        bounds.append(2.82 / max(flow_speed, 1e-30))
    if spec.gamma > 0:
        bounds.append(2.78 / (spec.gamma * flow_speed**2))
    if spec.Gamma > 0:
        xm, pm = grid.meshes()
        h_max = float(np.abs(model.hamiltonian(xm, pm, 0.0)).max()) + kappa * float(np.abs(x).max())
        bounds.append(2.78 / (4.0 * spec.Gamma * h_max**2))
    if spec.hbar2_correction and model.hbar > 0:
        c3 = model.hbar**2 / 24.0 * float(np.abs(model.dv(x, 3)).max())
        if c3 > 0:
            bounds.append(2.82 / (c3 * s3 / grid.dp**3))
    return safety * min(bounds)
