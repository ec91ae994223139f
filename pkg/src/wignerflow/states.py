"""Initial Wigner fields: Gaussian wavepackets and even/odd cat states."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import ConfigurationError
from .grid import PhaseGrid, WignerField, integrate


def gaussian_values(x, p, x0, p0, sigma_x, sigma_p):
    amp = 1.0 / (2.0 * math.pi * sigma_x * sigma_p)
    return amp * np.exp(
        -((x - x0) ** 2) / (2.0 * sigma_x**2) - ((p - p0) ** 2) / (2.0 * sigma_p**2)
    )


def gaussian_state(
    x0: float,
    p0: float,
    sigma_x: float,
    sigma_p: float,
    grid: PhaseGrid,
    renormalize: bool = True,
) -> WignerField:
    """Gaussian wavepacket, renormalized on the grid so that integrate == 1."""
    if sigma_x <= 0 or sigma_p <= 0:
        raise ConfigurationError("gaussian_state needs positive widths")
    if (
        x0 - 4 * sigma_x < grid.xmin
        or x0 + 4 * sigma_x > grid.xmax
        or p0 - 4 * sigma_p < grid.pmin
        or p0 + 4 * sigma_p > grid.pmax
    ):
        warnings.warn("grid window narrower than 4 sigma around the mean; state truncated")
    xm, pm = grid.meshes()
    w = WignerField(grid, gaussian_values(xm, pm, x0, p0, sigma_x, sigma_p))
    if renormalize:
        w = w.with_values(w.values / integrate(w))
    return w


def cat_values(x, p, alpha: float, phi: float):
    norm = 1.0 / (math.pi * (1.0 + math.cos(phi) * math.exp(-2.0 * alpha**2)))
    return norm * (
        np.exp(-2.0 * ((x - alpha) ** 2 + p**2))
        + np.exp(-2.0 * ((x + alpha) ** 2 + p**2))
        + 2.0 * np.exp(-2.0 * (x**2 + p**2)) * np.cos(4.0 * alpha * p - phi)
    )


def cat_state(alpha: float, phi: float, grid: PhaseGrid) -> WignerField:
    """Coherent-superposition Wigner function, exact closed form.

    Uses the hbar = 1, m*omega = 1 convention implicit in the closed-form
    normalization; no grid renormalization is applied.
    """
    if alpha <= 0:
        raise ConfigurationError("cat_state needs alpha > 0")
    if not (0.0 <= phi < 2.0 * math.pi):
        raise ConfigurationError("cat_state needs phi in [0, 2*pi)")
    xm, pm = grid.meshes()
    return WignerField(grid, cat_values(xm, pm, alpha, phi))
