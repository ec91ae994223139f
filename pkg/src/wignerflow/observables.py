"""Expectation values, energy moments, negativity measures, and series records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError
from .grid import WignerField, integrate_values, pairwise_sum
from .hamiltonian import HamiltonianModel

SERIES_HEADER = "t,norm,x,p,x2,p2,xp,H,mu2,mu4,Wneg,neg_area"
_COLUMNS = SERIES_HEADER.split(",")[1:]


def expectation(a, w: WignerField, t: float = 0.0) -> float:
    """Quadrature of A(x, p, t) * W over the grid.

    `a` may be a callable (x, p, t) or (x, p) -> array, or a precomputed
    array sampled on the grid.
    """
    if callable(a):
        xm, pm = w.grid.meshes()
        try:
            a = a(xm, pm, t)
        except TypeError:
            a = a(xm, pm)
    return integrate_values(np.asarray(a) * w.values, w.grid)


def energy_moment(n: int, model: HamiltonianModel, w: WignerField, t: float = 0.0) -> float:
    """mu_n = integral of H(x,p,t)^n W."""
    xm, pm = w.grid.meshes()
    h = model.hamiltonian(xm, pm, t)
    return integrate_values(h**n * w.values, w.grid)


def _log_abs_integral(w: WignerField) -> float:
    return math.log(integrate_values(np.abs(w.values), w.grid))


def wigner_log_negativity(w: WignerField) -> float:
    """log of the integral of |W|; zero (up to quadrature) iff W >= 0."""
    norm = integrate_values(w.values, w.grid)
    if abs(norm - 1.0) > 1e-6:
        raise ContractViolationError(f"wigner_log_negativity needs a normalized field, got norm {norm}")
    return _log_abs_integral(w)


def negative_area(w: WignerField) -> float:
    """integral of min(W, 0); always <= 0."""
    return integrate_values(np.minimum(w.values, 0.0), w.grid)


def covariance(w: WignerField) -> np.ndarray:
    """2x2 covariance matrix of (x, p) under a normalized W."""
    xm, pm = w.grid.meshes()
    mx = expectation(xm, w)
    mp = expectation(pm, w)
    cxx = expectation((xm - mx) ** 2, w)
    cpp = expectation((pm - mp) ** 2, w)
    cxp = expectation((xm - mx) * (pm - mp), w)
    return np.array([[cxx, cxp], [cxp, cpp]])


@dataclass
class ObservableSeries:
    """Time-stamped records of the standard observables."""

    times: list = field(default_factory=list)
    records: dict = field(default_factory=lambda: {c: [] for c in _COLUMNS})

    def append(self, t: float, record: dict) -> None:
        if self.times and t <= self.times[-1]:
            raise ContractViolationError("series times must be strictly increasing")
        self.times.append(t)
        for c in _COLUMNS:
            self.records[c].append(record[c])

    def column(self, name: str) -> np.ndarray:
        if name == "t":
            return np.asarray(self.times)
        return np.asarray(self.records[name])

    def __len__(self) -> int:
        return len(self.times)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(SERIES_HEADER + "\n")
            for i, t in enumerate(self.times):
                row = [t] + [self.records[c][i] for c in _COLUMNS]
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "ObservableSeries":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        series = cls()
        for row in data:
            series.append(row[0], dict(zip(_COLUMNS, row[1:])))
        return series


def record_observables(model: HamiltonianModel, w: WignerField, t: float) -> dict:
    xm, pm = w.grid.meshes()
    weights = w.grid.trapezoid_weights()
    wv = w.values * weights
    norm = pairwise_sum(wv)
    h = model.hamiltonian(xm, pm, t)
    rec = {
        "norm": norm,
        "x": pairwise_sum(xm * wv),
        "p": pairwise_sum(pm * wv),
        "x2": pairwise_sum(xm * xm * wv),
        "p2": pairwise_sum(pm * pm * wv),
        "xp": pairwise_sum(xm * pm * wv),
        "H": pairwise_sum(h * wv),
        "mu2": pairwise_sum(h * h * wv),
        "mu4": pairwise_sum(h**4 * wv),
        "Wneg": math.log(pairwise_sum(np.abs(w.values) * weights)),
        "neg_area": pairwise_sum(np.minimum(w.values, 0.0) * weights),
    }
    return rec


def classical_emergence_time(series: ObservableSeries, eps: float | None = None):
    """First time the total negative area vanishes (rises above -eps).

    eps defaults to 1e-6 of the recorded mass. If the series never dips
    below -eps the first recorded time is returned (the field was never
    meaningfully negative); if negativity appears and persists through
    the final sample, None (not yet classical). Otherwise the first
    crossing back above -eps after the onset of negativity, located by
    linear interpolation between samples.
    """
    times = series.column("t")
    neg = series.column("neg_area")
    norm = series.column("norm")
    if eps is None:
        eps = 1e-6 * float(norm[0])
    below = neg < -eps
    if not below.any():
        return float(times[0])
    onset = int(np.argmax(below))
    after = below[onset:]
    if after.all():
        return None
    k = onset + int(np.argmin(after))  # first sample at/above -eps past onset
    t0, t1 = times[k - 1], times[k]
    n0, n1 = neg[k - 1], neg[k]
    if n1 == n0:
        return float(t1)
    frac = (-eps - n0) / (n1 - n0)
    return float(t0 + frac * (t1 - t0))
