"""Self-contained verification suites behind `wigner-flow verify`.

Each check compares a PDE evolution or matrix computation against an
independent closed-form oracle and reports (name, measured, tolerance,
pass). These are desk-scale versions of the cross-checks in the test
suite; the suite passes iff every check passes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import oracles, quantum
from .dynamics import FilterSpec, GeneratorSpec, evolve
from .errors import ConfigurationError
from .grid import PhaseGrid
from .hamiltonian import HamiltonianModel
from .states import gaussian_state, gaussian_values

SUITES = ("oracles", "quantum", "gradient", "filters", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool


def _check(name: str, measured: float, tolerance: float) -> CheckResult:
    return CheckResult(name, float(measured), float(tolerance), bool(measured < tolerance))


def _suite_oracles() -> list[CheckResult]:
    grid = PhaseGrid(nx=192, np=192, xmin=-6, xmax=6, pmin=-6, pmax=6)
    model = HamiltonianModel.sho(m=1.0, omega=1.0)
    w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, grid)
    t, dt, gamma = 0.5, 1e-3, 0.3

    final = {}

    def keep_final(tt, w):
        final["w"] = w

    spec = GeneratorSpec(advection=True, gamma=gamma)
    evolve(spec, model, w0, t, dt, record_every=500, on_record=keep_final)
    w_pde = final["w"]

    def w0_eval(x, p):
        return gaussian_values(x, p, 1.0, 1.0, 0.5, 0.5)

    w_hk = oracles.heat_kernel_solution(w0_eval, gamma, t, 1.0, 1.0, grid)
    err = np.abs(w_pde.values - w_hk.values).max() / np.abs(w_hk.values).max()
    out = [_check("dephasing-pde-vs-heat-kernel", err, 1e-3)]

    spec_gl = GeneratorSpec(advection=True, Gamma=0.3)
    series_gl = evolve(spec_gl, model, w0, t, dt, record_every=500, on_record=keep_final)
    w_gl = oracles.gainloss_closed_form(w0_eval, model, 0.3, t, grid)
    err_gl = np.abs(final["w"].values - w_gl.values).max() / np.abs(w_gl.values).max()
    out.append(_check("gainloss-pde-vs-closed-form", err_gl, 1e-3))
    norm_drift = np.abs(np.asarray(series_gl.column("norm")) - 1.0).max()
    out.append(_check("gainloss-norm-drift", norm_drift, 1e-6))
    return out


def _suite_quantum() -> list[CheckResult]:
    rng = np.random.default_rng(7)
    e = np.sort(rng.uniform(0.0, 2.0, 16))
    diag = rng.uniform(0.1, 1.0, 16)
    rho0 = np.diag(diag / diag.sum()).astype(complex)
    t, gamma_gl = 1.0, 0.3
    exact = quantum.gainloss_solution(rho0, e, gamma_gl, t)
    rk4 = quantum.integrate_master_equation(rho0, e, 0.0, gamma_gl, t, n_steps=2000)[-1]
    out = [_check("gainloss-me-vs-closed-form", np.abs(rk4 - exact).max(), 1e-8)]

    rho_full = quantum.random_density(8, rng)
    deph = quantum.dephasing_solution(rho_full, e[:8], 0.3, t)
    filt = FilterSpec((0.0, -0.15), lambda s: 1.0, "commutator")
    rk4_f = quantum.integrate_filter_equation(rho_full, e[:8], filt, t, n_steps=2000)[-1]
    out.append(_check("dephasing-vs-frequency-filter-rk4", np.abs(rk4_f - deph).max(), 1e-6))
    out.append(
        _check(
            "dephasing-population-drift",
            np.abs(np.diag(deph) - np.diag(rho_full)).max(),
            1e-14,
        )
    )
    return out


def _suite_gradient() -> list[CheckResult]:
    rng = np.random.default_rng(11)
    worst_grad = 0.0
    for _ in range(20):
        e = rng.uniform(0.0, 2.0, 4)
        rho = quantum.random_density(4, rng)
        gamma, xi = rng.uniform(0.05, 0.5, 2)
        fd = quantum.potential_gradient_fd(rho, e, gamma, xi)
        closed = quantum.gradient_flow_generator(rho, e, gamma, xi)
        worst_grad = max(worst_grad, float(np.abs(fd - closed).max()))
    out = [_check("fd-gradient-vs-generator", worst_grad, 1e-6)]

    worst_s = -math.inf
    worst_pot = 0.0
    for _ in range(100):
        d = int(rng.integers(3, 9))
        e = rng.uniform(0.0, 3.0, d)
        sigma = quantum.random_density(d, rng)
        gamma = rng.uniform(0.0, 0.4)
        xi = gamma + rng.uniform(0.01, 0.5)
        worst_s = max(worst_s, quantum.convexity_indicator(sigma, e, gamma, xi))
        rho = quantum.random_density(d, rng)
        hb = np.diag(e).astype(complex)
        worst_pot = max(
            worst_pot,
            abs(
                quantum.gradient_potential(rho, sigma, hb, gamma, xi)
                - quantum.gradient_potential_eigenbasis(rho, sigma, e, gamma, xi)
            ),
        )
    out.append(_check("convexity-indicator-max", worst_s, 1e-12))
    out.append(_check("potential-eigenbasis-vs-hs", worst_pot, 1e-10))
    return out


def _suite_filters() -> list[CheckResult]:
    rng = np.random.default_rng(13)
    e = np.sort(rng.uniform(0.0, 2.0, 12))
    rho0 = quantum.random_density(12, rng)
    t, gamma = 0.7, 0.3

    freq = quantum.FilterFunction("frequency", lambda x: -(x**2), lambda s: gamma * s)
    filt_sol = quantum.spectral_filter_solution(rho0, e, freq, t)
    deph = quantum.dephasing_solution(rho0, e, 2.0 * gamma, t)
    out = [_check("frequency-filter-vs-dephasing-2x", np.abs(filt_sol - deph).max(), 1e-12)]

    gl_rate = 0.2
    eig = quantum.FilterFunction("eigenvalue", lambda x: -gl_rate * x**2, lambda s: s)
    eig_sol = quantum.spectral_filter_solution(rho0, e, eig, t)
    gl = quantum.gainloss_solution(rho0, e, gl_rate, t)
    out.append(_check("eigenvalue-filter-vs-gainloss", np.abs(eig_sol - gl).max(), 1e-12))

    two = np.array([0.0, 1.3])
    sff = quantum.filtered_sff(two, lambda x: np.ones_like(x), t)
    expected = (2.0 + 2.0 * math.cos(1.3 * t)) / 4.0
    out.append(_check("filtered-sff-two-level", abs(sff - expected), 1e-12))
    out.append(_check("filtered-sff-even-window-imag", abs(sff.imag), 1e-12))
    return out


def run_suite(suite: str) -> list[CheckResult]:
    if suite not in SUITES:
        raise ConfigurationError(f"unknown suite {suite!r} (choose from {', '.join(SUITES)})")
    runners = {
        "oracles": _suite_oracles,
        "quantum": _suite_quantum,
        "gradient": _suite_gradient,
        "filters": _suite_filters,
    }
    names = list(runners) if suite == "all" else [suite]
    results: list[CheckResult] = []
    for name in names:
        results.extend(runners[name]())
    return results


def report(results: list[CheckResult]) -> str:
    """Machine-readable (JSON lines) report."""
    lines = [
        json.dumps(
            {
                "name": r.name,
                "measured": r.measured,
                "tolerance": r.tolerance,
                "pass": r.passed,
            }
        )
        for r in results
    ]
    return "\n".join(lines)
