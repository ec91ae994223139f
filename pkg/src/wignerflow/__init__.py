"""Phase-space simulator for double-bracket master equations.

Evolves Wigner functions under the classical limits of energy dephasing
(double Poisson bracket) and balanced gain/loss (trace-compensated
H^2 damping), with optional leading Moyal correction and nested-bracket
spectral filters, and cross-checks every evolution against closed-form
oracles and truncated-eigenbasis quantum references.
"""

from .dynamics import (
    FilterSpec,
    GeneratorSpec,
    assemble_rhs,
    evolve,
    gainloss_term,
    hbar2_moyal_correction,
    nested_poisson,
    poisson_bracket,
    stable_dt,
    step_rk4,
)
from .errors import (
    ConfigurationError,
    ContractViolationError,
    InstabilityError,
    UnsupportedOrderError,
)
from .grid import (
    PhaseGrid,
    WignerField,
    integrate,
    load_snapshot,
    partial_derivative,
    save_snapshot,
)
from .hamiltonian import HamiltonianModel
from .oracles import (
    ActionAngleField,
    RingSpectrum,
    as_printed_moments,
    energy_marginal,
    fourier_mode_evolution,
    gainloss_closed_form,
    gaussian_action_marginal,
    heat_kernel_solution,
    integrate_action_angle,
    reconstruct_rings,
    ring_spectrum,
    sho_first_moments,
    sho_flow,
    sho_second_moments,
    to_action_angle,
    trace_flow,
)
from .quantum import (
    DensityMatrix,
    FilterFunction,
    convexity_indicator,
    dephasing_solution,
    double_bracket_generator,
    filtered_sff,
    gainloss_solution,
    gradient_flow_generator,
    gradient_potential,
    gradient_potential_eigenbasis,
    integrate_filter_equation,
    integrate_master_equation,
    nested_bracket_rhs,
    potential_gradient_fd,
    random_density,
    sho_spectrum,
    spectral_filter_solution,
)
from .scenarios import (
    PRESETS,
    ScenarioConfig,
    config_from_dict,
    load_config,
    run_scenario,
    run_sweep,
)
from .observables import (
    ObservableSeries,
    classical_emergence_time,
    covariance,
    energy_moment,
    expectation,
    negative_area,
    record_observables,
    wigner_log_negativity,
)
from .states import cat_state, gaussian_state

__version__ = "0.1.0"

__all__ = [
    "ActionAngleField",
    "ConfigurationError",
    "ContractViolationError",
    "DensityMatrix",
    "FilterFunction",
    "FilterSpec",
    "GeneratorSpec",
    "HamiltonianModel",
    "InstabilityError",
    "ObservableSeries",
    "PRESETS",
    "PhaseGrid",
    "RingSpectrum",
    "ScenarioConfig",
    "UnsupportedOrderError",
    "WignerField",
    "as_printed_moments",
    "assemble_rhs",
    "cat_state",
    "classical_emergence_time",
    "config_from_dict",
    "convexity_indicator",
    "covariance",
    "dephasing_solution",
    "double_bracket_generator",
    "energy_marginal",
    "energy_moment",
    "evolve",
    "expectation",
    "filtered_sff",
    "fourier_mode_evolution",
    "gainloss_closed_form",
    "gainloss_solution",
    "gainloss_term",
    "gaussian_action_marginal",
    "gaussian_state",
    "gradient_flow_generator",
    "gradient_potential",
    "gradient_potential_eigenbasis",
    "hbar2_moyal_correction",
    "heat_kernel_solution",
    "integrate",
    "integrate_action_angle",
    "integrate_filter_equation",
    "integrate_master_equation",
    "load_config",
    "load_snapshot",
    "negative_area",
    "nested_bracket_rhs",
    "nested_poisson",
    "partial_derivative",
    "poisson_bracket",
    "potential_gradient_fd",
    "random_density",
    "reconstruct_rings",
    "record_observables",
    "ring_spectrum",
    "run_scenario",
    "run_sweep",
    "save_snapshot",
    "sho_first_moments",
    "sho_flow",
    "sho_second_moments",
    "sho_spectrum",
    "spectral_filter_solution",
    "stable_dt",
    "step_rk4",
    "to_action_angle",
    "trace_flow",
    "wigner_log_negativity",
]
