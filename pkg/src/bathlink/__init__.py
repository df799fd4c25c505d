"""Qubit-oscillator pair damped by a common thermal bath.

Builds the Markovian (GKSL) generator of the pair, integrates the dynamics,
and computes entanglement (negativity), mutual information, quantum
discord, and the short-time entanglement-generation witness.
"""

from .correlations import (
    CorrelationSample,
    MeasurementAngles,
    conditional_entropy,
    discord,
    mutual_information,
    negativity,
    von_neumann_entropy,
)
from .dynamics import (
    Trajectory,
    evolve_exact,
    evolve_rk,
    product_state,
    propagate,
    trajectory_to_csv,
    validate_density_matrix,
)
from .errors import (
    ConfigError,
    DegenerateSteadyStateError,
    NumericalInvariantError,
    StabilityError,
)
from .model import (
    Liouvillian,
    ModelParams,
    SteadyStateResult,
    apply_liouvillian,
    build_liouvillian,
    hamiltonian,
    kossakowski_matrix,
    rates_from_temperature,
    steady_state_analytic,
    steady_state_numeric,
)
from .witness import (
    RegionScan,
    WitnessReport,
    dxi0_from_generator,
    dxi0_general,
    dxi0_quadratic,
    is_entangling,
    region_scan,
    witness_vector,
    xi,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CorrelationSample",
    "DegenerateSteadyStateError",
    "Liouvillian",
    "MeasurementAngles",
    "ModelParams",
    "NumericalInvariantError",
    "RegionScan",
    "StabilityError",
    "SteadyStateResult",
    "Trajectory",
    "WitnessReport",
    "apply_liouvillian",
    "build_liouvillian",
    "conditional_entropy",
    "discord",
    "dxi0_from_generator",
    "dxi0_general",
    "dxi0_quadratic",
    "evolve_exact",
    "evolve_rk",
    "hamiltonian",
    "is_entangling",
    "kossakowski_matrix",
    "mutual_information",
    "negativity",
    "product_state",
    "propagate",
    "rates_from_temperature",
    "region_scan",
    "steady_state_analytic",
    "steady_state_numeric",
    "trajectory_to_csv",
    "validate_density_matrix",
    "von_neumann_entropy",
    "witness_vector",
    "xi",
]
