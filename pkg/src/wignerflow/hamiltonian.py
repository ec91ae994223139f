"""Hamiltonian H(x, p, t) = p^2/2m + V(x) + kappa*x*cos(omega_d*t).

V(x) is polynomial (coefficients in ascending order), so all the
derivatives entering the bracket operators are available analytically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class HamiltonianModel:
    m: float = 1.0
    potential: tuple[float, ...] = (0.0,)  # V(x) = sum_k potential[k] * x**k
    drive: tuple[float, float] | None = None  # (kappa, omega_d)
    hbar: float = 1.0

    def __post_init__(self):
        if self.m <= 0:
            raise ConfigurationError("mass must be positive")
        if self.hbar < 0:
            raise ConfigurationError("hbar must be >= 0")
        object.__setattr__(self, "potential", tuple(float(c) for c in self.potential))

    @classmethod
    def sho(cls, m: float = 1.0, omega: float = 1.0, hbar: float = 1.0) -> "HamiltonianModel":
        return cls(m=m, potential=(0.0, 0.0, 0.5 * m * omega**2), hbar=hbar)

    @classmethod
    def driven_anharmonic(
        cls,
        m: float = 1.0,
        a: float = 1.0,
        b: float = 0.1,
        kappa: float = 0.0,
        omega_d: float = 1.0,
        hbar: float = 1.0,
    ) -> "HamiltonianModel":
        """Double well V(x) = -a x^2 + b x^4 with optional linear drive."""
        drive = (kappa, omega_d) if kappa else None
        return cls(m=m, potential=(0.0, 0.0, -a, 0.0, b), drive=drive, hbar=hbar)

    @property
    def omega(self) -> float:
        """Angular frequency, defined for a pure quadratic potential."""
        c = self.potential
        if len(c) > 3 and any(c[3:]) or (len(c) > 1 and c[1]):
            raise ConfigurationError("omega is defined only for V = (m w^2 / 2) x^2")
        c2 = c[2] if len(c) > 2 else 0.0
        if c2 <= 0:
            raise ConfigurationError("omega undefined for non-confining quadratic")
        return float(np.sqrt(2.0 * c2 / self.m))

    def _poly_derivative(self, k: int) -> np.polynomial.Polynomial:
        return np.polynomial.Polynomial(self.potential).deriv(k) if k else np.polynomial.Polynomial(self.potential)

    def potential_energy(self, x):
        return self._poly_derivative(0)(x)

    def dv(self, x, order: int = 1):
        """order-th derivative of the static potential V."""
        return self._poly_derivative(order)(x)

    def drive_force(self, t: float) -> float:
        """dH/dx contribution of the drive at time t (kappa*cos(omega_d t))."""
        if self.drive is None:
            return 0.0
        kappa, omega_d = self.drive
        return kappa * np.cos(omega_d * t)

    def hamiltonian(self, x, p, t: float = 0.0):
        h = p * p / (2.0 * self.m) + self.potential_energy(x)
        if self.drive is not None:
            h = h + self.drive_force(t) * x
        return h

    def dh_dx(self, x, t: float = 0.0):
        return self.dv(x, 1) + self.drive_force(t)

    def dh_dp(self, p):
        return p / self.m
