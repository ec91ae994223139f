"""Closed-form and semi-analytic reference solutions.

These are the ground-truth routes against which the PDE solver is
cross-checked: the Hamiltonian-flow heat kernel for classical dephasing,
ring Fourier modes in action-angle variables, and the characteristic
solution of the balanced gain/loss equation.

Flow-direction convention: transport solutions pull the initial datum
back along the flow, W(x, p, t) = W0(phi_{-t}(x, p)), which is what the
advection term {H,W}_P = V' dW/dp - (p/m) dW/dx propagates (packet
centers follow the forward flow). This was validated against short-time
PDE runs; the kernel variance is 2*gamma*t, the value consistent both
with the PDE and with the first-moment decay exp(-gamma w^2 t).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator

from .errors import ConfigurationError, ContractViolationError
from .grid import PhaseGrid, WignerField, integrate_values, pairwise_sum
from .hamiltonian import HamiltonianModel


# ---------------------------------------------------------------------------
# Hamiltonian flow


def sho_flow(x, p, u: float, m: float = 1.0, omega: float = 1.0):
    """Forward harmonic flow by time u (exact rotation matrix)."""
    c, s = math.cos(omega * u), math.sin(omega * u)
    return c * x + s / (m * omega) * p, -m * omega * s * x + c * p


def trace_flow(model: HamiltonianModel, x, p, u: float, n_steps: int = 256):
    """RK4 characteristic tracing of Hamilton's equations (approximate).

    Used for non-quadratic static potentials where no closed-form flow
    exists; accuracy is O((u/n_steps)^4).
    """
    x = np.array(x, dtype=float, copy=True)
    p = np.array(p, dtype=float, copy=True)
    h = u / n_steps

    def rhs(xv, pv):
        return pv / model.m, -model.dv(xv, 1)

    for _ in range(n_steps):
        k1x, k1p = rhs(x, p)
        k2x, k2p = rhs(x + 0.5 * h * k1x, p + 0.5 * h * k1p)
        k3x, k3p = rhs(x + 0.5 * h * k2x, p + 0.5 * h * k2p)
        k4x, k4p = rhs(x + h * k3x, p + h * k3p)
        x += h / 6.0 * (k1x + 2 * (k2x + k3x) + k4x)
        p += h / 6.0 * (k1p + 2 * (k2p + k3p) + k4p)
    return x, p


# ---------------------------------------------------------------------------
# Classical dephasing: heat kernel over flow time


def heat_kernel_solution(
    w0,
    gamma: float,
    t: float,
    m: float,
    omega: float,
    grid: PhaseGrid,
    n_quad: int = 64,
    tol: float = 1e-8,
) -> WignerField:
    """Dephasing solution W(t) = exp(gamma t L^2) exp(t L) W0 on a grid.

    w0 must be a closure (x, p) -> values, evaluable off-grid. The
    Gaussian average over flow time u has mean t and variance 2*gamma*t;
    Gauss-Legendre nodes over +-6 standard deviations, doubled until the
    field changes by less than tol.
    """
    if gamma <= 0 or t <= 0:
        raise ConfigurationError("heat_kernel_solution needs gamma > 0 and t > 0")
    xm, pm = grid.meshes()
    sd = math.sqrt(2.0 * gamma * t)

    def evaluate(n):
        nodes, wts = leggauss(n)
        u = t + 6.0 * sd * nodes
        du = 6.0 * sd * wts
        out = np.zeros_like(xm)
        for ui, dui in zip(u, du):
            kern = math.exp(-((t - ui) ** 2) / (4.0 * gamma * t)) / math.sqrt(
                4.0 * math.pi * gamma * t
            )
            xb, pb = sho_flow(xm, pm, -ui, m, omega)
            out += dui * kern * w0(xb, pb)
        return out

    prev = evaluate(n_quad)
    for _ in range(4):
        n_quad *= 2
        cur = evaluate(n_quad)
        if np.max(np.abs(cur - prev)) < tol:
            prev = cur
            break
        prev = cur
    return WignerField(grid, prev)


def sho_first_moments(x0, p0, m, omega, gamma, t):
    """(<x>, <p>) under classical dephasing; both decay as exp(-gamma w^2 t)."""
    damp = math.exp(-gamma * omega**2 * t)
    c, s = math.cos(omega * t), math.sin(omega * t)
    mean_x = damp * (x0 * c + p0 / (m * omega) * s)
    mean_p = damp * (-m * omega * x0 * s + p0 * c)
    return mean_x, mean_p


def sho_second_moments(x0, p0, sigma_x, sigma_p, m, omega, gamma, t):
    """(<x^2>, <p^2>, <xp>) from the heat-kernel definition (closed form)."""
    mw = m * omega
    q0 = p0 / mw
    sq = sigma_p / mw
    damp = math.exp(-4.0 * gamma * omega**2 * t)
    c2, s2 = math.cos(2 * omega * t), math.sin(2 * omega * t)
    base = 0.5 * (x0**2 + q0**2 + sigma_x**2 + sq**2)
    osc = 0.5 * (x0**2 - q0**2 + sigma_x**2 - sq**2) * c2 + x0 * q0 * s2
    x2 = base + damp * osc
    p2 = mw**2 * (base - damp * osc)
    xp = mw * damp * (0.5 * (q0**2 - x0**2 + sq**2 - sigma_x**2) * s2 + x0 * q0 * c2)
    return x2, p2, xp


def as_printed_moments(x0, p0, sigma_x, sigma_p, m, omega, gamma, t):
    """The source formulas exactly as printed, for the audit report.

    Returned dict carries <x>, <p>, <x^2>, <p^2>, <xp>; the <p>, second
    moment and cross-term expressions are known to disagree with the
    heat-kernel oracle (see the moment audit) and are never used as
    ground truth.
    """
    mw = m * omega
    damp = math.exp(-gamma * omega**2 * t)
    damp2 = math.exp(-2.0 * gamma * omega**2 * t)
    c, s = math.cos(omega * t), math.sin(omega * t)
    c2, s2 = math.cos(2 * omega * t), math.sin(2 * omega * t)
    mean_x = damp * (x0 * c + p0 / mw * s)
    mean_p = mw * damp * (-x0 * c + p0 / mw * s)
    x2 = (
        damp2 * (x0**2 / 2 - p0**2 / (2 * mw**2)) * c2
        + sigma_x**2
        + x0 * p0 / (2 * mw) * damp2 * s2
        + x0**2 / 2
        + p0**2 / (2 * mw**2)
    )
    p2 = mw**2 * (-x2 + sigma_x**2 + sigma_p**2)
    xp = mw * (
        (p0**2 / mw**2 - x0**2) * damp2 * s2
        + x0 * p0 / mw * (1 - 2 * damp2 * c2)
    )
    return {"x": mean_x, "p": mean_p, "x2": x2, "p2": p2, "xp": xp}


# ---------------------------------------------------------------------------
# Action-angle representation and ring Fourier modes


@dataclass(frozen=True)
class ActionAngleField:
    """Field W(I, theta); theta grid excludes the 2*pi endpoint (periodic)."""

    i_values: np.ndarray = field(repr=False)
    theta_values: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    m: float = 1.0
    omega: float = 1.0


@dataclass(frozen=True)
class RingSpectrum:
    """Per-ring complex Fourier coefficients W_k(I), k in [-K, K]."""

    i_values: np.ndarray = field(repr=False)
    k_values: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def reality_defect(self) -> float:
        """max |W_{-k} - conj(W_k)| over rings."""
        rev = self.coeffs[:, ::-1]
        return float(np.abs(rev - np.conj(self.coeffs)).max())

    def mode(self, k: int) -> np.ndarray:
        """Coefficients W_k(I) for one wavenumber, over all rings."""
        idx = np.nonzero(self.k_values == k)[0]
        if idx.size != 1:
            raise ConfigurationError(f"wavenumber {k} not present in spectrum")
        return self.coeffs[:, idx[0]]


def to_action_angle(
    w: WignerField,
    m: float,
    omega: float,
    n_i: int = 64,
    n_theta: int = 256,
    i_max: float | None = None,
) -> ActionAngleField:
    """Resample W on action-angle rings (bilinear interpolation).

    Convention: X = sqrt(m w) x, P = p / sqrt(m w), I = (X^2 + P^2)/2,
    theta = atan2(P, X); the (I, theta) measure equals dx dp.
    """
    g = w.grid
    root = math.sqrt(m * omega)
    r_fit = min(g.xmax * root, -g.xmin * root, g.pmax / root, -g.pmin / root)
    if r_fit <= 0:
        raise ConfigurationError("grid does not enclose the origin")
    fit_max = 0.5 * r_fit**2
    if i_max is None:
        i_max = fit_max
    elif i_max > fit_max:
        warnings.warn("rings beyond the grid are truncated (filled with 0)")
    interp = RegularGridInterpolator(
        (g.x, g.p), w.values, method="linear", bounds_error=False, fill_value=0.0
    )
    i_values = np.linspace(0.0, i_max, n_i)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    r = np.sqrt(2.0 * i_values)
    xs = np.outer(r, np.cos(theta)) / root
    ps = np.outer(r, np.sin(theta)) * root
    vals = interp(np.stack([xs.ravel(), ps.ravel()], axis=-1)).reshape(n_i, n_theta)
    return ActionAngleField(i_values, theta, vals, m, omega)


def integrate_action_angle(aa: ActionAngleField) -> float:
    """Trapezoid in I times periodic quadrature in theta."""
    di = aa.i_values[1] - aa.i_values[0]
    dtheta = 2.0 * math.pi / len(aa.theta_values)
    wi = np.full(len(aa.i_values), di)
    wi[0] = wi[-1] = 0.5 * di
    return pairwise_sum(aa.values * wi[:, None] * dtheta)


def ring_spectrum(aa: ActionAngleField, k_max: int) -> RingSpectrum:
    coeffs = np.fft.fft(aa.values, axis=1) / aa.values.shape[1]
    ks = np.arange(-k_max, k_max + 1)
    return RingSpectrum(aa.i_values, ks, coeffs[:, ks])


def fourier_mode_evolution(spec: RingSpectrum, gamma: float, omega: float, t: float) -> RingSpectrum:
    """Ring-mode dephasing evolution: damping exp(-gamma w^2 k^2 t) per mode.

    The phase factor exp(+i k w t) follows this package's bracket
    orientation (modes measured against exp(i k theta) with theta =
    atan2(P, X)); k = 0 modes are invariant.
    """
    factor = np.exp((1j * spec.k_values * omega - gamma * omega**2 * spec.k_values**2) * t)
    return RingSpectrum(spec.i_values, spec.k_values, spec.coeffs * factor)


def reconstruct_rings(spec: RingSpectrum, theta_values: np.ndarray) -> np.ndarray:
    """Real-space ring values from coefficients (real part; imag ~ 0)."""
    phases = np.exp(1j * np.outer(spec.k_values, theta_values))
    vals = spec.coeffs @ phases
    return vals.real


def energy_marginal(aa: ActionAngleField) -> np.ndarray:
    """(1/2pi) integral over theta at each ring (periodic trapezoid = mean)."""
    return aa.values.mean(axis=1)


def gaussian_action_marginal(i_values, x0, p0, sigma: float):
    """Closed-form marginal of an isotropic Gaussian: Bessel-I0 profile."""
    from scipy.special import i0e

    i0_action = 0.5 * (x0**2 + p0**2)
    z = 2.0 * np.sqrt(i_values * i0_action) / sigma**2
    # i0e carries exp(-z); recombine for a stable product
    return (
        1.0
        / (2.0 * math.pi * sigma**2)
        * np.exp(-(i_values + i0_action) / sigma**2 + z)
        * i0e(z)
    )


# ---------------------------------------------------------------------------
# Balanced gain/loss: characteristic-curve solution


def gainloss_closed_form(
    w0,
    model: HamiltonianModel,
    gamma_gl: float,
    t: float,
    grid: PhaseGrid,
    flow_steps: int = 512,
) -> WignerField:
    """W(t) = W0(phi_{-t}) exp(-4 Gamma H^2 t) / normalization.

    w0 is a closure (x, p) -> values or a WignerField (spline-sampled).
    The backward flow is analytic for quadratic V (SHO) and RK4-traced
    otherwise (approximate). H must not depend on time.
    """
    if model.drive is not None:
        raise ConfigurationError("closed form needs a time-independent H")
    if isinstance(w0, WignerField):
        spline = RectBivariateSpline(w0.grid.x, w0.grid.p, w0.values, kx=3, ky=3)

        def w0_eval(x, p):
            return spline.ev(x, p)

    else:
        w0_eval = w0
    xm, pm = grid.meshes()
    coeffs = model.potential
    quadratic = all(c == 0.0 for c in coeffs[3:]) and (len(coeffs) < 2 or coeffs[1] == 0.0)
    if quadratic and len(coeffs) > 2 and coeffs[2] > 0:
        omega = math.sqrt(2.0 * coeffs[2] / model.m)
        xb, pb = sho_flow(xm, pm, -t, model.m, omega)
    else:
        xb, pb = trace_flow(model, xm, pm, -t, n_steps=flow_steps)
    h = model.hamiltonian(xm, pm, 0.0)
    vals = w0_eval(xb, pb) * np.exp(-4.0 * gamma_gl * h * h * t)
    norm = integrate_values(vals, grid)
    return WignerField(grid, vals / norm)
