"""Uniform phase-space grid, scalar fields, derivatives and quadrature.

Conventions: inclusive endpoints (dx = (xmax-xmin)/(nx-1)), row-major
values with x as the leading axis. Finite differences are 4th-order
central stencils in the interior with one-sided stencils of matching
order at the edges; fields are assumed to decay near the boundary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError

# Half-widths of the interior central stencils per derivative order.
_CENTRAL_HALFWIDTH = {1: 2, 2: 2, 3: 3}
# Point counts of the one-sided edge stencils (4th-order accurate).
_ONESIDED_NPTS = {1: 5, 2: 6, 3: 7}


def stencil_weights(offsets: tuple[int, ...], order: int) -> np.ndarray:
    """Finite-difference weights for d^order/dz^order on integer offsets.

    Solves the Vandermonde moment system exactly; weights are for unit
    spacing and must be divided by h**order.
    """
    off = np.asarray(offsets, dtype=float)
    n = len(off)
    if order >= n:
        raise ConfigurationError(f"{n}-point stencil cannot yield order-{order} derivative")
    a = np.vander(off, n, increasing=True).T  # a[k, j] = off[j]**k
    b = np.zeros(n)
    b[order] = math.factorial(order)
    return np.linalg.solve(a, b)


@lru_cache(maxsize=64)
def _stencil_table(n: int, order: int) -> tuple[np.ndarray, np.ndarray, int]:
    """(central weights, one-sided rows, halfwidth) for an n-point axis."""
    hw = _CENTRAL_HALFWIDTH[order]
    npts = _ONESIDED_NPTS[order]
    if n < npts:
        raise ConfigurationError(
            f"axis of {n} points too small for order-{order} stencil ({npts} needed)"
        )
    central = stencil_weights(tuple(range(-hw, hw + 1)), order)
    onesided = np.stack(
        [stencil_weights(tuple(range(-i, npts - i)), order) for i in range(hw)]
    )
    return central, onesided, hw


def diff_axis(
    values: np.ndarray, h: float, axis: int, order: int, boundary: str = "onesided"
) -> np.ndarray:
    """Apply the finite-difference derivative along one axis of a 2-D array.

    boundary = "onesided" closes the edges with one-sided stencils of
    matching order (right for fields that are smooth but nonzero at the
    boundary). boundary = "zero" extends the field by zeros and applies
    the central stencil everywhere; for decaying fields this keeps the
    discrete derivative skew-symmetric, which matters for the stability
    of repeatedly applied transport operators.
    """
    if order not in (1, 2, 3):
        raise ConfigurationError(f"derivative order must be 1..3, got {order}")
    v = np.moveaxis(values, axis, -1)
    n = v.shape[-1]
    central, onesided, hw = _stencil_table(n, order)
    if boundary == "zero":
        vp = np.zeros(v.shape[:-1] + (n + 2 * hw,), dtype=v.dtype)
        vp[..., hw : hw + n] = v
        out = np.zeros_like(v)
        for j, w in enumerate(central):
            out += w * vp[..., j : j + n]
        out /= h**order
        return np.moveaxis(out, -1, axis)
    if boundary != "onesided":
        raise ConfigurationError(f"unknown boundary mode {boundary!r}")
    out = np.empty_like(v)
    interior = out[..., hw : n - hw]
    interior.fill(0.0)
    for j, w in enumerate(central):
        interior += w * v[..., j : n - 2 * hw + j]
    npts = onesided.shape[1]
    sign = -1.0 if order % 2 else 1.0  # mirrored one-sided weights
    for i in range(hw):
        out[..., i] = v[..., :npts] @ onesided[i]
        out[..., n - 1 - i] = sign * (v[..., n - npts :] @ onesided[i][::-1])
    out /= h**order
    return np.moveaxis(out, -1, axis)


def pairwise_sum(values: np.ndarray) -> float:
    """Deterministic pairwise reduction of a 1-D array."""
    v = np.asarray(values, dtype=float).ravel()
    n = v.size
    if n == 0:
        return 0.0
    # pad to a power of two and halve repeatedly: fixed association order
    m = 1 << (n - 1).bit_length()
    if m != n:
        v = np.concatenate([v, np.zeros(m - n)])
    else:
        v = v.copy()
    while v.size > 1:
        v = v[0::2] + v[1::2]
    return float(v[0])


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform rectangular (x, p) grid with inclusive endpoints."""

    nx: int
    np: int
    xmin: float
    xmax: float
    pmin: float
    pmax: float

    def __post_init__(self):
        if self.nx < 8 or self.np < 8:
            raise ConfigurationError("grid needs nx >= 8 and np >= 8")
        if not (self.xmax > self.xmin and self.pmax > self.pmin):
            raise ConfigurationError("grid bounds must satisfy xmax > xmin, pmax > pmin")

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / (self.nx - 1)

    @property
    def dp(self) -> float:
        return (self.pmax - self.pmin) / (self.np - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.pmin, self.pmax, self.np)

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, P) meshes of shape (nx, np)."""
        return np.meshgrid(self.x, self.p, indexing="ij")

    def trapezoid_weights(self) -> np.ndarray:
        wx = np.full(self.nx, self.dx)
        wx[0] = wx[-1] = 0.5 * self.dx
        wp = np.full(self.np, self.dp)
        wp[0] = wp[-1] = 0.5 * self.dp
        return np.outer(wx, wp)


@dataclass(frozen=True)
class WignerField:
    """Real scalar field on a PhaseGrid (discrete Wigner function)."""

    grid: PhaseGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.nx, self.grid.np):
            raise ConfigurationError(
                f"values shape {v.shape} does not match grid ({self.grid.nx}, {self.grid.np})"
            )
        if not np.isfinite(v).all():
            raise ConfigurationError("field values must be finite")
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "WignerField":
        return WignerField(self.grid, values)


def partial_derivative(w: WignerField, axis: str, order: int = 1) -> WignerField:
    """∂^order W along 'x' or 'p', 4th-order accurate."""
    if axis not in ("x", "p"):
        raise ConfigurationError(f"axis must be 'x' or 'p', got {axis!r}")
    ax = 0 if axis == "x" else 1
    h = w.grid.dx if axis == "x" else w.grid.dp
    return w.with_values(diff_axis(w.values, h, ax, order))


def integrate(w: WignerField) -> float:
    """Trapezoidal quadrature of the field over the full grid."""
    return pairwise_sum(w.values * w.grid.trapezoid_weights())


def integrate_values(values: np.ndarray, grid: PhaseGrid) -> float:
    return pairwise_sum(values * grid.trapezoid_weights())


def save_snapshot(w: WignerField, t: float, path) -> None:
    """Write the published snapshot format: header + row-major values."""
    g = w.grid
    with open(path, "w") as fh:
        fh.write(
            f"# {g.nx} {g.np} {g.xmin:.17g} {g.xmax:.17g} "
            f"{g.pmin:.17g} {g.pmax:.17g} {t:.17g}\n"
        )
        flat = w.values.ravel()
        for i in range(0, flat.size, g.np):
            fh.write(" ".join(f"{v:.17g}" for v in flat[i : i + g.np]) + "\n")


def load_snapshot(path) -> tuple[WignerField, float]:
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ConfigurationError(f"{path}: missing snapshot header")
        parts = header[1:].split()
        nx, npts = int(parts[0]), int(parts[1])
        xmin, xmax, pmin, pmax, t = map(float, parts[2:7])
        values = np.loadtxt(fh).reshape(nx, npts)
    grid = PhaseGrid(nx, npts, xmin, xmax, pmin, pmax)
    return WignerField(grid, values), t
