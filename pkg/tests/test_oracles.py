import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from wignerflow import (
    ConfigurationError,
    GeneratorSpec,
    HamiltonianModel,
    PhaseGrid,
    WignerField,
    evolve,
    expectation,
    gainloss_closed_form,
    gaussian_action_marginal,
    gaussian_state,
    heat_kernel_solution,
    integrate,
    integrate_action_angle,
    ring_spectrum,
    fourier_mode_evolution,
    reconstruct_rings,
    sho_first_moments,
    sho_flow,
    sho_second_moments,
    to_action_angle,
    trace_flow,
)
from wignerflow.oracles import as_printed_moments, energy_marginal
from wignerflow.states import gaussian_values

SHO = HamiltonianModel.sho(m=1.0, omega=1.0)


def grid256(half=6.0):
    return PhaseGrid(nx=256, np=256, xmin=-half, xmax=half, pmin=-half, pmax=half)


class TestFlows:
    def test_sho_flow_quarter_period(self):
        # Hamiltonian flow is clockwise in (x, p): (1, 0) -> (0, -1)
        x, p = sho_flow(np.array([1.0]), np.array([0.0]), math.pi / 2)
        assert_allclose(x, [0.0], atol=1e-12)
        assert_allclose(p, [-1.0], atol=1e-12)

    def test_sho_flow_preserves_energy(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=50)
        p = rng.normal(size=50)
        xf, pf = sho_flow(x, p, 0.7, m=1.0, omega=2.0)
        h0 = p**2 / 2 + 2.0 * x**2
        hf = pf**2 / 2 + 2.0 * xf**2
        assert_allclose(hf, h0, rtol=1e-12)

    def test_trace_flow_matches_sho_flow(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=20)
        p = rng.normal(size=20)
        xf, pf = trace_flow(SHO, x, p, 1.3, n_steps=512)
        xe, pe = sho_flow(x, p, 1.3)
        assert_allclose(xf, xe, atol=1e-9)
        assert_allclose(pf, pe, atol=1e-9)

    def test_trace_flow_inverse(self):
        model = HamiltonianModel(m=1.0, potential=(0.0, 0.0, 0.5, 0.0, 0.025), drive=None)
        x = np.array([1.2, -0.4])
        p = np.array([0.3, 0.9])
        xf, pf = trace_flow(model, x, p, 0.8, n_steps=512)
        xb, pb = trace_flow(model, xf, pf, -0.8, n_steps=512)
        assert_allclose(xb, x, atol=1e-8)
        assert_allclose(pb, p, atol=1e-8)


class TestHeatKernel:
    def test_normalization(self):
        g = grid256()
        w0 = lambda x, p: gaussian_values(x, p, 1.0, 1.0, 0.5, 0.5)
        sol = heat_kernel_solution(w0, 0.3, 1.0, 1.0, 1.0, g)
        assert abs(integrate(sol) - 1.0) < 1e-6

    def test_function_of_h_is_fixed_point(self):
        g = grid256()

        def w0(x, p):
            h = (p**2 + x**2) / 2
            return np.exp(-h) / (2 * math.pi)

        sol = heat_kernel_solution(w0, 0.3, 1.5, 1.0, 1.0, g)
        xm, pm = g.meshes()
        assert np.abs(sol.values - w0(xm, pm)).max() < 1e-9

    def test_semigroup_property(self):
        # evolving for t1+t2 equals evolving the t1 result for t2
        g = PhaseGrid(nx=128, np=128, xmin=-6, xmax=6, pmin=-6, pmax=6)
        w0 = lambda x, p: gaussian_values(x, p, 1.0, 0.0, 0.6, 0.6)
        direct = heat_kernel_solution(w0, 0.2, 1.5, 1.0, 1.0, g)

        mid_t = 0.5

        def w_mid(x, p):
            out = np.zeros(np.broadcast(x, p).shape)
            flat_x = np.atleast_1d(np.asarray(x, dtype=float))
            flat_p = np.atleast_1d(np.asarray(p, dtype=float))
            # re-evaluate the intermediate solution pointwise via its own kernel
            return _kernel_eval(w0, 0.2, mid_t, flat_x, flat_p).reshape(np.shape(out))

        def _kernel_eval(w0_fn, gamma, t, x, p):
            from numpy.polynomial.legendre import leggauss

            sigma = math.sqrt(2 * gamma * t)
            nodes, weights = leggauss(96)
            lo, hi = t - 6 * sigma, t + 6 * sigma
            u = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
            wts = 0.5 * (hi - lo) * weights
            acc = np.zeros_like(np.broadcast_arrays(x, p)[0], dtype=float)
            for ui, wi in zip(u, wts):
                xb, pb = sho_flow(x, p, -ui)
                k = math.exp(-((t - ui) ** 2) / (4 * gamma * t)) / math.sqrt(
                    4 * math.pi * gamma * t
                )
                acc = acc + wi * k * w0_fn(xb, pb)
            return acc

        chained = heat_kernel_solution(w_mid, 0.2, 1.0, 1.0, 1.0, g)
        scale = np.abs(direct.values).max()
        assert np.abs(chained.values - direct.values).max() < 5e-3 * scale

    def test_rejects_nonpositive_parameters(self):
        g = PhaseGrid(nx=32, np=32, xmin=-6, xmax=6, pmin=-6, pmax=6)
        w0 = lambda x, p: gaussian_values(x, p, 0, 0, 0.5, 0.5)
        with pytest.raises(ConfigurationError):
            heat_kernel_solution(w0, -0.1, 1.0, 1.0, 1.0, g)
        with pytest.raises(ConfigurationError):
            heat_kernel_solution(w0, 0.1, 0.0, 1.0, 1.0, g)

    def test_first_moments_match_kernel(self):
        g = grid256()
        x0, p0, sx, sp, gamma, t = 1.0, 1.0, 0.5, 0.5, 0.3, 1.0
        w0 = lambda x, p: gaussian_values(x, p, x0, p0, sx, sp)
        sol = heat_kernel_solution(w0, gamma, t, 1.0, 1.0, g)
        mx, mp = sho_first_moments(x0, p0, 1.0, 1.0, gamma, t)
        assert abs(expectation(lambda x, p: x, sol) - mx) < 1e-6
        assert abs(expectation(lambda x, p: p, sol) - mp) < 1e-6

    def test_second_moments_match_kernel(self):
        g = grid256()
        x0, p0, sx, sp, gamma, t = 1.0, 1.0, 0.5, 0.5, 0.3, 1.0
        w0 = lambda x, p: gaussian_values(x, p, x0, p0, sx, sp)
        sol = heat_kernel_solution(w0, gamma, t, 1.0, 1.0, g)
        xx, pp, xp = sho_second_moments(x0, p0, sx, sp, 1.0, 1.0, gamma, t)
        assert abs(expectation(lambda x, p: x * x, sol) - xx) < 1e-6
        assert abs(expectation(lambda x, p: p * p, sol) - pp) < 1e-6
        assert abs(expectation(lambda x, p: x * p, sol) - xp) < 1e-6

    def test_as_printed_mean_position_matches_oracle(self):
        printed = as_printed_moments(1.0, 1.0, 0.5, 0.5, 1.0, 1.0, 0.3, 1.0)
        assert set(printed) == {"x", "p", "x2", "p2", "xp"}
        mx, _ = sho_first_moments(1.0, 1.0, 1.0, 1.0, 0.3, 1.0)
        assert abs(printed["x"] - mx) < 1e-12


class TestActionAngle:
    def test_round_trip_reconstruction(self):
        g = grid256()
        w = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        aa = to_action_angle(w, 1.0, 1.0, n_i=96, n_theta=256)
        # k_max stops one short of Nyquist, so only that mode is dropped
        spec = ring_spectrum(aa, k_max=127)
        rebuilt = reconstruct_rings(spec, aa.theta_values)
        assert np.abs(rebuilt - aa.values).max() < 1e-4
        coarse = ring_spectrum(aa, k_max=16)
        partial = reconstruct_rings(coarse, aa.theta_values)
        assert np.abs(partial - aa.values).max() > np.abs(rebuilt - aa.values).max()

    def test_total_mass_preserved(self):
        g = grid256()
        w = gaussian_state(1.0, 0.0, 0.5, 0.5, g)
        aa = to_action_angle(w, 1.0, 1.0, n_i=512, n_theta=256)
        assert abs(integrate_action_angle(aa) - 1.0) < 5e-4

    def test_gaussian_action_marginal(self):
        g = grid256()
        x0, p0, sigma = 1.0, 1.0, 0.5
        w = gaussian_state(x0, p0, sigma, sigma, g)
        aa = to_action_angle(w, 1.0, 1.0, n_i=96, n_theta=256)
        marginal = energy_marginal(aa)
        expected = gaussian_action_marginal(aa.i_values, x0, p0, sigma)
        assert np.abs(marginal - expected).max() < 1e-4

    @pytest.mark.filterwarnings("ignore:grid window narrower")
    def test_truncation_warning(self):
        g = PhaseGrid(nx=64, np=64, xmin=-2, xmax=2, pmin=-2, pmax=2)
        w = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        with pytest.warns(UserWarning):
            to_action_angle(w, 1.0, 1.0, i_max=8.0)

    @settings(max_examples=20, deadline=None)
    @given(k=st.integers(min_value=1, max_value=6), t=st.floats(min_value=0.0, max_value=3.0))
    def test_mode_evolution_preserves_reality(self, k, t):
        g = PhaseGrid(nx=128, np=128, xmin=-6, xmax=6, pmin=-6, pmax=6)
        w = gaussian_state(1.0, 1.0, 0.6, 0.6, g)
        aa = to_action_angle(w, 1.0, 1.0, n_i=24, n_theta=64)
        spec = ring_spectrum(aa, k_max=k)
        out = fourier_mode_evolution(spec, 0.25, 1.0, t)
        assert out.reality_defect() < 1e-10

    def test_mode_decay_magnitude(self):
        g = grid256()
        w = gaussian_state(1.0, 1.0, 0.5, 0.5, g)
        aa = to_action_angle(w, 1.0, 1.0, n_i=48, n_theta=256)
        spec0 = ring_spectrum(aa, k_max=4)
        gamma, omega, t = 0.3, 1.0, 2.0
        out = fourier_mode_evolution(spec0, gamma, omega, t)
        for k in (1, 2, 3, 4):
            ratio = np.abs(out.mode(k)) / np.maximum(np.abs(spec0.mode(k)), 1e-300)
            mask = np.abs(spec0.mode(k)) > 1e-8
            expected = math.exp(-gamma * omega**2 * k**2 * t)
            assert_allclose(ratio[mask], expected, rtol=1e-12)


class TestGainLossClosedForm:
    def test_zero_rate_is_pure_transport(self):
        g = grid256()
        w0 = lambda x, p: gaussian_values(x, p, 1.0, 1.0, 0.5, 0.5)
        t = 1.3
        sol = gainloss_closed_form(w0, SHO, 1e-14, t, g)
        xm, pm = g.meshes()
        xb, pb = sho_flow(xm, pm, -t)
        transported = gaussian_values(xb, pb, 1.0, 1.0, 0.5, 0.5)
        assert np.abs(sol.values - transported).max() < 1e-6

    def test_normalized(self):
        g = grid256()
        w0 = lambda x, p: gaussian_values(x, p, 1.0, 1.0, 0.5, 0.5)
        sol = gainloss_closed_form(w0, SHO, 0.3, 1.0, g)
        assert abs(integrate(sol) - 1.0) < 1e-6

    def test_strong_damping_concentrates_near_origin(self):
        g = grid256()
        w0 = lambda x, p: gaussian_values(x, p, 1.0, 1.0, 0.5, 0.5)
        weak = gainloss_closed_form(w0, SHO, 0.05, 1.0, g)
        strong = gainloss_closed_form(w0, SHO, 2.0, 1.0, g)
        h_weak = expectation(SHO.hamiltonian, weak)
        h_strong = expectation(SHO.hamiltonian, strong)
        assert h_strong < h_weak

    def test_field_input_matches_closure_input(self):
        g = grid256()
        w0 = lambda x, p: gaussian_values(x, p, 1.0, 1.0, 0.5, 0.5)
        xm, pm = g.meshes()
        field = WignerField(g, w0(xm, pm))
        a = gainloss_closed_form(w0, SHO, 0.3, 1.0, g)
        b = gainloss_closed_form(field, SHO, 0.3, 1.0, g)
        scale = np.abs(a.values).max()
        assert np.abs(a.values - b.values).max() < 1e-4 * scale

    def test_rejects_driven_model(self):
        driven = HamiltonianModel.driven_anharmonic(
            m=1.0, a=1.0, b=0.1, kappa=0.2, omega_d=1.0
        )
        g = PhaseGrid(nx=32, np=32, xmin=-4, xmax=4, pmin=-4, pmax=4)
        w0 = lambda x, p: gaussian_values(x, p, 0, 0, 0.7, 0.7)
        with pytest.raises(ConfigurationError):
            gainloss_closed_form(w0, driven, 0.3, 1.0, g)
