"""Finite-dimensional matrix references for the double-bracket equations.

Everything here lives in the eigenbasis of a fixed Hermitian H with
eigenvalues `energies`. Exact solutions (dephasing, normalized gain/loss,
spectral filters) are compared against direct RK4 integration of the
nonlinear master equation and against finite-difference gradients of the
free-energy-like potential that generates the flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractViolationError


def _as_density(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ConfigurationError("density matrix must be square")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ContractViolationError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ContractViolationError("density matrix trace is not 1")
    return rho


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state (Wishart-normalized)."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def sho_spectrum(dim: int, omega: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    """E_n = hbar omega (n + 1/2) for n = 0..dim-1."""
    return hbar * omega * (np.arange(dim) + 0.5)


@dataclass(frozen=True)
class DensityMatrix:
    """State in a truncated energy eigenbasis with spectrum E_0..E_{d-1}."""

    matrix: np.ndarray = field(repr=False)
    spectrum: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _as_density(self.matrix)
        e = np.asarray(self.spectrum, dtype=float)
        if e.shape != (m.shape[0],):
            raise ConfigurationError("spectrum length must match matrix dimension")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "spectrum", e)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def check_positive(self, tol: float = 1e-10) -> None:
        lo = float(np.linalg.eigvalsh(self.matrix).min())
        if lo < -tol:
            raise ContractViolationError(f"negative eigenvalue {lo:.3e}")

    def diagnostics(self, pairs=((0, 1), (0, 2))) -> dict:
        """trace, purity and selected coherence magnitudes, CSV-friendly."""
        out = {
            "trace": float(np.trace(self.matrix).real),
            "purity": self.purity(),
        }
        for n, m in pairs:
            out[f"abs_rho_{n}{m}"] = float(abs(self.matrix[n, m]))
        return out


# ---------------------------------------------------------------------------
# Exact solutions in the H eigenbasis


def dephasing_solution(rho0, energies, gamma: float, t: float, hbar: float = 1.0):
    """rho_mn(t) = rho_mn(0) exp(-i (E_m - E_n) t / hbar - gamma Delta^2 t / 2).

    Populations are exactly invariant; coherences decay at half the
    double-commutator rate gamma per squared gap.
    """
    rho0 = _as_density(rho0)
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    return rho0 * np.exp(-1j * delta * t / hbar - 0.5 * gamma * delta**2 * t)


def gainloss_solution(rho0, energies, gamma_gl: float, t: float, hbar: float = 1.0):
    """Normalized anticommutator flow.

    rho_mn(t) proportional to rho_mn(0) exp(-i Delta t / hbar) *
    exp(-Gamma (E_m + E_n)^2 t), divided by the trace of the diagonal
    weights sum_k rho_kk(0) exp(-4 Gamma E_k^2 t).
    """
    rho0 = _as_density(rho0)
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    sigma = e[:, None] + e[None, :]
    raw = rho0 * np.exp(-1j * delta * t / hbar - gamma_gl * sigma**2 * t)
    norm = np.sum(np.diag(rho0).real * np.exp(-4.0 * gamma_gl * e**2 * t))
    return raw / norm


# ---------------------------------------------------------------------------
# Generators and direct integration


def double_bracket_generator(rho, energies, gamma: float, gamma_gl: float, hbar: float = 1.0):
    """-(i/hbar)[H, rho] - (gamma/2)[H,[H,rho]] - Gamma{H,{H,rho}} + 4 Gamma tr(H^2 rho) rho.

    In the eigenbasis the commutator pieces multiply rho_mn by
    -(i Delta/hbar) - (gamma/2) Delta^2; the trace-compensated
    anticommutator pieces by -Gamma Sigma^2 + 4 Gamma <H^2>. The rates
    are the ones whose exact solutions are dephasing_solution and
    gainloss_solution respectively.
    """
    rho = np.asarray(rho, dtype=complex)
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    sigma = e[:, None] + e[None, :]
    out = (-1j * delta / hbar - 0.5 * gamma * delta**2) * rho
    if gamma_gl != 0.0:
        h2_mean = float(np.sum(np.diag(rho).real * e**2))
        out += (-gamma_gl * sigma**2 + 4.0 * gamma_gl * h2_mean) * rho
    return out


def integrate_master_equation(
    rho0, energies, gamma: float, gamma_gl: float, t: float, n_steps: int, hbar: float = 1.0
):
    """Classic RK4 on the (nonlinear, trace-preserving) master equation.

    Returns the trajectory [rho(0), rho(h), ..., rho(t)].
    """
    rho = _as_density(rho0).copy()
    h = t / n_steps
    traj = [rho]
    for _ in range(n_steps):
        k1 = double_bracket_generator(rho, energies, gamma, gamma_gl, hbar)
        k2 = double_bracket_generator(rho + 0.5 * h * k1, energies, gamma, gamma_gl, hbar)
        k3 = double_bracket_generator(rho + 0.5 * h * k2, energies, gamma, gamma_gl, hbar)
        k4 = double_bracket_generator(rho + h * k3, energies, gamma, gamma_gl, hbar)
        rho = rho + h / 6.0 * (k1 + 2 * (k2 + k3) + k4)
        traj.append(rho)
    return traj


# ---------------------------------------------------------------------------
# Gradient-flow structure
#
# Phi(rho, sigma) = Phi_0 + Phi_- + Phi_+ with
#   Phi_0 = tr(-(i/hbar)[H, rho] sigma)      (linear tangent-plane part)
#   Phi_- = -Gamma ||[H, sigma]||_HS^2       (double commutator)
#   Phi_+ = -xi ||{H, sigma}||_HS^2          (double anticommutator)
# The Hermitian-matrix gradient at sigma = rho is
#   grad Phi = -(i/hbar)[H, rho] - 2 Gamma [H,[H,rho]] - 2 xi {H,{H,rho}},
# i.e. the dissipative generator with both rates doubled (the quadratic
# potentials contribute twice on the diagonal of the second derivative).
# This mapping is pinned by the finite-difference oracle below.


def gradient_potential(rho, sigma, h_matrix, gamma: float, xi: float, hbar: float = 1.0):
    """Basis-free Hilbert-Schmidt form of Phi(rho, sigma); real scalar."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    h = np.asarray(h_matrix, dtype=complex)
    if not (rho.shape == sigma.shape == h.shape):
        raise ConfigurationError("rho, sigma, H must share a dimension")
    comm_rho = h @ rho - rho @ h
    phi0 = np.trace(-1j / hbar * comm_rho @ sigma).real
    comm = h @ sigma - sigma @ h
    anti = h @ sigma + sigma @ h
    phi_minus = -gamma * np.trace(comm @ comm.conj().T).real
    phi_plus = -xi * np.trace(anti @ anti.conj().T).real
    return float(phi0 + phi_minus + phi_plus)


def gradient_potential_eigenbasis(rho, sigma, energies, gamma: float, xi: float, hbar: float = 1.0):
    """Eigenbasis form of the same potential (H diagonal with `energies`).

    -(i/hbar) sum E_n (rho_nm sigma_mn - sigma_nm rho_mn)
    - 2 Gamma sum (E_n^2 - E_n E_m) sigma_nm sigma_mn
    - 2 xi sum (E_n^2 + E_n E_m) sigma_nm sigma_mn.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    e = np.asarray(energies, dtype=float)
    phi0 = (-1j / hbar * np.sum(e[:, None] * (rho * sigma.T - sigma * rho.T))).real
    abs2 = (sigma * sigma.T).real  # sigma_nm sigma_mn = |sigma_nm|^2 (Hermitian)
    phi_minus = -2.0 * gamma * np.sum((e[:, None] ** 2 - e[:, None] * e[None, :]) * abs2)
    phi_plus = -2.0 * xi * np.sum((e[:, None] ** 2 + e[:, None] * e[None, :]) * abs2)
    return float(phi0 + phi_minus + phi_plus)


def potential_gradient_fd(rho, energies, gamma: float, xi: float, hbar: float = 1.0, h: float = 1e-5):
    """Hermitian finite-difference gradient of Phi at sigma = rho.

    Component (n, m) is (dPhi/dRe + i dPhi/dIm)/2 off the diagonal and
    dPhi/dsigma_nn on it; central differences with step h. This is the
    brute-force oracle for gradient_flow_generator.
    """
    rho = np.asarray(rho, dtype=complex)
    e = np.asarray(energies, dtype=float)
    h_matrix = np.diag(e).astype(complex)
    dim = rho.shape[0]
    grad = np.zeros((dim, dim), dtype=complex)

    def phi(sigma):
        return gradient_potential(rho, sigma, h_matrix, gamma, xi, hbar)

    for n in range(dim):
        basis = np.zeros((dim, dim), dtype=complex)
        basis[n, n] = 1.0
        grad[n, n] = (phi(rho + h * basis) - phi(rho - h * basis)) / (2 * h)
        for m in range(n + 1, dim):
            re = np.zeros((dim, dim), dtype=complex)
            re[n, m] = re[m, n] = 1.0
            im = np.zeros((dim, dim), dtype=complex)
            im[n, m] = 1j
            im[m, n] = -1j
            d_re = (phi(rho + h * re) - phi(rho - h * re)) / (2 * h)
            d_im = (phi(rho + h * im) - phi(rho - h * im)) / (2 * h)
            grad[n, m] = 0.5 * (d_re + 1j * d_im)
            grad[m, n] = np.conj(grad[n, m])
    return grad


def gradient_flow_generator(rho, energies, gamma: float, xi: float, hbar: float = 1.0):
    """Closed-form grad Phi at sigma = rho (rates doubled, see above)."""
    rho = np.asarray(rho, dtype=complex)
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    sig = e[:, None] + e[None, :]
    return (-1j * delta / hbar - 2.0 * gamma * delta**2 - 2.0 * xi * sig**2) * rho


def convexity_indicator(sigma, energies, gamma: float, xi: float):
    """S(sigma) = -2 sum_mn E_n ((xi + Gamma) E_n + (xi - Gamma) E_m) |sigma_mn|^2.

    Non-positive whenever the spectrum is non-negative and xi >= Gamma,
    which certifies monotone decay of the dissipative potential.
    """
    sigma = np.asarray(sigma, dtype=complex)
    e = np.asarray(energies, dtype=float)
    weight = e[None, :] * ((xi + gamma) * e[None, :] + (xi - gamma) * e[:, None])
    return float(-2.0 * np.sum(weight * np.abs(sigma) ** 2))


# ---------------------------------------------------------------------------
# Spectral filters


@dataclass(frozen=True)
class FilterFunction:
    """Even filter profile G and schedule chi(t).

    kind 'frequency' acts on gaps E_m - E_n (commutator chain);
    kind 'eigenvalue' acts on sums E_m + E_n (anticommutator chain) and
    is trace-normalized.
    """

    kind: str
    profile: object = field(compare=False)
    chi: object = field(compare=False)

    def __post_init__(self):
        if self.kind not in ("frequency", "eigenvalue"):
            raise ConfigurationError(f"unknown filter kind {self.kind!r}")


def spectral_filter_solution(rho0, energies, filt: FilterFunction, t: float, hbar: float = 1.0):
    """Apply exp(chi(t) G(argument)) entrywise in the eigenbasis."""
    rho0 = _as_density(rho0)
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    chi_t = float(filt.chi(t))
    phase = np.exp(-1j * delta * t / hbar)
    if filt.kind == "frequency":
        return rho0 * phase * np.exp(chi_t * filt.profile(delta))
    sigma = e[:, None] + e[None, :]
    raw = rho0 * phase * np.exp(chi_t * filt.profile(sigma))
    norm = np.sum(np.diag(rho0).real * np.exp(chi_t * filt.profile(2.0 * e)))
    return raw / norm


def filtered_sff(energies, window, t: float) -> complex:
    """(1/d^2) sum_mn w(E_m - E_n) exp(-i t (E_m - E_n))."""
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    d = len(e)
    return complex(np.sum(window(delta) * np.exp(-1j * t * delta)) / d**2)


def nested_bracket_rhs(rho, energies, filt, t: float, hbar: float = 1.0):
    """Filter master-equation RHS in the eigenbasis.

    -(i/hbar)[H, rho] + chi'(t) sum_n c_n [H, rho]_2n for the commutator
    (frequency) variant, where [H, .]_2n has eigenbasis symbol Delta^2n;
    the anticommutator (eigenvalue) variant uses the trace-compensated
    chain {H, rho}_2n - 2^2n tr(H^2n rho) rho with symbol Sigma^2n.
    `filt` carries even_taylor_coeffs (n = 0..N_max), chi_dot, variant.
    """
    rho = np.asarray(rho, dtype=complex)
    e = np.asarray(energies, dtype=float)
    delta = e[:, None] - e[None, :]
    sigma = e[:, None] + e[None, :]
    rate = float(filt.chi_dot(t))
    out = (-1j * delta / hbar) * rho
    if filt.variant == "commutator":
        for n, c in enumerate(filt.even_taylor_coeffs):
            out += rate * c * delta ** (2 * n) * rho
        return out
    if filt.variant != "anticommutator":
        raise ConfigurationError(f"unknown variant {filt.variant!r}")
    for n, c in enumerate(filt.even_taylor_coeffs):
        if n == 0:
            continue  # {H, rho}_0 - tr(rho) rho vanishes for unit trace
        mean = float(np.sum(np.diag(rho).real * (2.0 * e) ** (2 * n)))
        out += rate * c * (sigma ** (2 * n) - mean) * rho
    return out


def integrate_filter_equation(rho0, energies, filt, t: float, n_steps: int, hbar: float = 1.0):
    """RK4 on nested_bracket_rhs, for cross-checking spectral_filter_solution.

    Returns the trajectory [rho(0), rho(h), ..., rho(t)].
    """
    rho = _as_density(rho0).copy()
    h = t / n_steps
    traj = [rho]
    for k in range(n_steps):
        s = k * h
        k1 = nested_bracket_rhs(rho, energies, filt, s, hbar)
        k2 = nested_bracket_rhs(rho + 0.5 * h * k1, energies, filt, s + 0.5 * h, hbar)
        k3 = nested_bracket_rhs(rho + 0.5 * h * k2, energies, filt, s + 0.5 * h, hbar)
        k4 = nested_bracket_rhs(rho + h * k3, energies, filt, s + h, hbar)
        rho = rho + h / 6.0 * (k1 + 2 * (k2 + k3) + k4)
        traj.append(rho)
    return traj
