"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A grid, stencil, or scenario configuration is invalid."""


class ContractViolationError(ValueError):
    """An operation received input violating its documented contract."""


class InstabilityError(RuntimeError):
    """A time integration produced NaN/Inf values."""

    def __init__(self, t: float, dt: float, message: str = ""):
        self.t = t
        self.dt = dt
        super().__init__(
            f"non-finite field at t={t:.6g} (dt={dt:.3g})"
            + (f": {message}" if message else "")
        )


class UnsupportedOrderError(ValueError):
    """A bracket or derivative order outside the supported range."""
