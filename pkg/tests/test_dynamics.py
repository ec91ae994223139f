import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wignerflow import (
    ConfigurationError,
    ContractViolationError,
    FilterSpec,
    GeneratorSpec,
    HamiltonianModel,
    PhaseGrid,
    UnsupportedOrderError,
    WignerField,
    assemble_rhs,
    evolve,
    gainloss_term,
    gaussian_state,
    hbar2_moyal_correction,
    integrate,
    nested_poisson,
    poisson_bracket,
    stable_dt,
    step_rk4,
)
from wignerflow.dynamics import hbar2_correction_general
from wignerflow.states import gaussian_values


def square_grid(n=128, half=6.0):
    return PhaseGrid(nx=n, np=n, xmin=-half, xmax=half, pmin=-half, pmax=half)


SHO = HamiltonianModel.sho(m=1.0, omega=1.0)


def analytic_gaussian_derivs(g, x0, p0, sx, sp):
    xm, pm = g.meshes()
    w = gaussian_values(xm, pm, x0, p0, sx, sp)
    dwdx = -(xm - x0) / sx**2 * w
    dwdp = -(pm - p0) / sp**2 * w
    return w, dwdx, dwdp


class TestPoissonBracket:
    def test_sho_advection_form(self):
        # {H, W}_P = m w^2 x dW/dp - (p/m) dW/dx
        g = square_grid()
        xm, pm = g.meshes()
        w, dwdx, dwdp = analytic_gaussian_derivs(g, 1.0, 1.0, 0.5, 0.5)
        pb = poisson_bracket(SHO, WignerField(g, w))
        expected = xm * dwdp - pm * dwdx
        assert np.abs(pb.values - expected).max() < 1e-3 * np.abs(expected).max()

    def test_function_of_h_refines_at_fourth_order(self):
        errs = []
        for n in (64, 128):
            g = square_grid(n)
            xm, pm = g.meshes()
            h = SHO.hamiltonian(xm, pm)
            pb = poisson_bracket(SHO, WignerField(g, np.exp(-h)))
            errs.append(np.abs(pb.values).max())
        assert errs[0] / errs[1] > 12.0

    def test_free_particle(self):
        g = square_grid(96)
        model = HamiltonianModel(m=2.0, potential=(0.0,), drive=None, hbar=1.0)
        xm, pm = g.meshes()
        w = WignerField(g, np.exp(-(xm**2)))
        pb = poisson_bracket(model, w)
        expected = -(pm / 2.0) * (-2.0 * xm * np.exp(-(xm**2)))
        interior = (slice(4, -4), slice(None))
        assert_allclose(pb.values[interior], expected[interior], atol=1e-3)


class TestNestedPoisson:
    def test_order_one_equals_bracket(self):
        g = square_grid(64)
        w = gaussian_state(1.0, 0.0, 0.6, 0.6, g)
        assert_allclose(
            nested_poisson(SHO, w, 1).values, poisson_bracket(SHO, w).values, rtol=0, atol=0
        )

    def test_function_of_h_annihilated(self):
        g = square_grid(128)
        xm, pm = g.meshes()
        h = SHO.hamiltonian(xm, pm)
        w = WignerField(g, np.exp(-h))
        for n in (1, 2):
            res = nested_poisson(SHO, w, n)
            assert np.abs(res.values).max() < 1e-3

    def test_unsupported_order(self):
        g = square_grid(32)
        w = gaussian_state(0.0, 0.0, 0.5, 0.5, g)
        with pytest.raises(UnsupportedOrderError):
            nested_poisson(SHO, w, 5)
        with pytest.raises(UnsupportedOrderError):
            nested_poisson(SHO, w, 0)


class TestGainLossTerm:
    def test_zero_sum(self):
        g = square_grid()
        w = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        term = gainloss_term(SHO, w, 0.3)
        assert abs(integrate(term)) < 1e-10

    def test_normalization_contract(self):
        g = square_grid(64)
        w = gaussian_state(0.0, 0.0, 0.5, 0.5, g)
        bad = w.with_values(2.0 * w.values)
        with pytest.raises(ContractViolationError):
            gainloss_term(SHO, bad, 0.3)

    def test_sign_pushes_mass_to_low_energy(self):
        g = square_grid()
        w = gaussian_state(0.0, 0.0, 0.8, 0.8, g)
        term = gainloss_term(SHO, w, 0.3)
        xm, pm = g.meshes()
        h = SHO.hamiltonian(xm, pm)
        low = h < 0.3
        assert term.values[low].sum() > 0.0


class TestMoyalCorrection:
    QUARTIC = HamiltonianModel.driven_anharmonic(m=1.0, a=1.0, b=0.1, kappa=0.0, omega_d=1.0)

    @pytest.mark.filterwarnings("ignore:grid window narrower")
    def test_two_path_equality(self):
        g = PhaseGrid(nx=96, np=96, xmin=-4, xmax=4, pmin=-5, pmax=5)
        w = gaussian_state(2.0, 0.0, 0.7, 0.7, g)
        fast = hbar2_moyal_correction(self.QUARTIC, w)
        general = hbar2_correction_general(self.QUARTIC, w)
        scale = np.abs(fast.values).max()
        assert np.abs(fast.values - general.values).max() < 1e-7 * scale

    def test_hbar_zero_vanishes(self):
        g = square_grid(48)
        w = gaussian_state(0.0, 0.0, 0.5, 0.5, g)
        res = hbar2_moyal_correction(self.QUARTIC, w, hbar=0.0)
        assert np.abs(res.values).max() == 0.0

    def test_quadratic_potential_vanishes(self):
        g = square_grid(48)
        w = gaussian_state(1.0, 0.0, 0.5, 0.5, g)
        res = hbar2_moyal_correction(SHO, w)
        assert np.abs(res.values).max() == 0.0


class TestAssembleRhs:
    def test_advection_only(self):
        g = square_grid(64)
        w = gaussian_state(1.0, 0.0, 0.6, 0.6, g)
        spec = GeneratorSpec(advection=True)
        assert_allclose(assemble_rhs(spec, SHO, w).values, poisson_bracket(SHO, w).values)

    def test_all_terms_disabled_rejected(self):
        with pytest.raises(ConfigurationError):
            GeneratorSpec(advection=False)

    def test_double_poisson_term(self):
        g = square_grid(64)
        w = gaussian_state(1.0, 0.0, 0.6, 0.6, g)
        gamma = 0.3
        spec = GeneratorSpec(advection=True, gamma=gamma)
        rhs = assemble_rhs(spec, SHO, w)
        expected = poisson_bracket(SHO, w).values + gamma * nested_poisson(SHO, w, 2).values
        assert_allclose(rhs.values, expected, atol=1e-12)

    def test_commutator_filter_c1_equals_double_poisson(self):
        g = square_grid(64)
        w = gaussian_state(1.0, 0.0, 0.6, 0.6, g)
        c1 = 0.25
        filt = FilterSpec((0.0, c1), lambda t: 1.0, "commutator")
        spec = GeneratorSpec(advection=False, filter=filt)
        rhs = assemble_rhs(spec, SHO, w)
        assert_allclose(rhs.values, c1 * nested_poisson(SHO, w, 2).values, atol=1e-12)

    def test_anticommutator_filter_c1_matches_gainloss(self):
        # c1 = -Gamma reproduces -4 Gamma (H^2 - <H^2>) W
        g = square_grid(64)
        w = gaussian_state(1.0, 0.0, 0.6, 0.6, g)
        Gamma = 0.3
        filt = FilterSpec((0.0, -Gamma), lambda t: 1.0, "anticommutator")
        spec = GeneratorSpec(advection=False, filter=filt)
        rhs = assemble_rhs(spec, SHO, w)
        assert_allclose(rhs.values, gainloss_term(SHO, w, Gamma).values, atol=1e-12)

    def test_commutator_filter_order_cap(self):
        g = square_grid(64)
        w = gaussian_state(1.0, 0.0, 0.6, 0.6, g)
        filt = FilterSpec((0.0, 1.0, 0.1, 0.01), lambda t: 1.0, "commutator")
        spec = GeneratorSpec(advection=False, filter=filt)
        with pytest.raises(UnsupportedOrderError):
            assemble_rhs(spec, SHO, w)


class TestEvolution:
    def test_mass_conservation_dephasing(self):
        g = square_grid(96)
        w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        spec = GeneratorSpec(advection=True, gamma=0.3)
        dt = stable_dt(spec, SHO, g, safety=0.8)
        series = evolve(spec, SHO, w0, 0.5, dt, record_every=200)
        norms = series.column("norm")
        assert np.abs(norms - norms[0]).max() < 1e-6

    def test_gainloss_norm_preserved(self):
        g = square_grid(96)
        w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        spec = GeneratorSpec(advection=True, Gamma=0.3)
        series = evolve(spec, SHO, w0, 0.5, 1e-3, record_every=100)
        assert np.abs(series.column("norm") - 1.0).max() < 1e-6

    def test_zero_horizon_returns_initial_record(self):
        g = square_grid(48)
        w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        spec = GeneratorSpec(advection=True)
        series = evolve(spec, SHO, w0, 0.0, 1e-3)
        assert len(series) == 1 and series.column("t")[0] == 0.0

    def test_step_requires_positive_dt(self):
        g = square_grid(48)
        w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        with pytest.raises(ConfigurationError):
            step_rk4(GeneratorSpec(advection=True), SHO, w0, 0.0, -1e-3)

    def test_snapshot_callback_times(self):
        g = square_grid(48)
        w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        seen = []
        evolve(
            GeneratorSpec(advection=True), SHO, w0, 0.1, 1e-2,
            snapshot_times=(0.0, 0.05, 0.1),
            on_snapshot=lambda t, w: seen.append(t),
        )
        assert seen == [0.0, 0.05, 0.1]


class TestStability:
    def test_bound_scales_with_grid(self):
        spec = GeneratorSpec(advection=True, gamma=0.3)
        coarse = stable_dt(spec, SHO, square_grid(64))
        fine = stable_dt(spec, SHO, square_grid(128))
        assert coarse > fine
        # double-Poisson stiffness scales ~quadratically with resolution
        assert coarse / fine == pytest.approx(4.0, rel=0.15)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_instability_raises_with_time_and_step(self):
        from wignerflow import InstabilityError

        g = square_grid(128)
        w0 = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        spec = GeneratorSpec(advection=True, gamma=0.3)
        bad_dt = 8.0 * stable_dt(spec, SHO, g, safety=1.0)
        with pytest.raises(InstabilityError) as err:
            evolve(spec, SHO, w0, 1.0, bad_dt)
        assert err.value.dt == bad_dt
