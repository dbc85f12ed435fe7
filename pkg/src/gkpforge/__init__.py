"""gkpforge: synthesize and certify grid states in a truncated Fock basis.

The package builds Gottesman-Kitaev-Preskill grid states from the vacuum
using a small universal gate set (quadrature shifts, squeezing, rotations,
and a quartic phase), optimizes gate parameters against analytically
assembled targets, measures how often the result's residual shift error
would escape correction, and simulates one round of shift-error correction
with an ancilla.
"""

from .circuit import (
    BLOCK_GATE_KINDS,
    BLOCK_PARAM_KEYS,
    LEAKAGE_PASS_THRESHOLD,
    CircuitParams,
    batch_fidelity_and_gradient,
    fidelity_and_gradient,
    fidelity_gradient,
    forward,
    generator_apply,
    validate_leakage,
)
from .exceptions import (
    ConfigurationError,
    CutoffTooSmallError,
    DimensionMismatchError,
    GkpForgeError,
    GridResolutionError,
    InvalidDimensionError,
    NonConvergedError,
    ResourceLimitError,
    UnsupportedGateError,
)
from .fock import (
    GATE_KINDS,
    TENSOR_DIMENSION_CAP,
    FockVector,
    GateCache,
    QuadratureGrid,
    annihilation,
    apply_gate,
    creation,
    evaluate_wavefunction,
    expectation,
    fidelity,
    fold_half_open,
    gate,
    hermite_table,
    momentum,
    number_operator,
    position,
    tensor,
    tensor_op,
    wavefunction,
)
from .gkp import (
    MAX_TRUNCATION_LOSS,
    SQRT_PI,
    TargetBuild,
    build_target,
    cutoff_for_leakage,
    select_cutoff,
    squeezed_vacuum,
    target_state,
)
from .logical import (
    FOURIER_ANGLE,
    ECOutcome,
    PhaseGateDecomposition,
    apply_product_phase,
    controlled_phase,
    ec_round,
    fourier,
    pauli_x,
    pauli_z,
    phase_gate,
    phase_gate_params,
)
from .metrics import (
    FAULT_TOLERANCE_THRESHOLD,
    THRESHOLD_DELTA,
    THRESHOLD_SQUEEZING_DB,
    ErrorProbabilityConfig,
    QualityReport,
    delta_from_db,
    error_probability,
    squeezing_db,
    twirled_error_probability,
    twirled_error_probability_quadrature,
    zak_overlap,
    zak_transform,
)
from .optimizer import OptimizationRecord, OptimizerConfig, optimize

__version__ = "0.1.0"

__all__ = [
    "BLOCK_GATE_KINDS",
    "BLOCK_PARAM_KEYS",
    "CircuitParams",
    "ConfigurationError",
    "CutoffTooSmallError",
    "DimensionMismatchError",
    "ECOutcome",
    "ErrorProbabilityConfig",
    "FAULT_TOLERANCE_THRESHOLD",
    "FOURIER_ANGLE",
    "FockVector",
    "GATE_KINDS",
    "GateCache",
    "GkpForgeError",
    "GridResolutionError",
    "InvalidDimensionError",
    "LEAKAGE_PASS_THRESHOLD",
    "MAX_TRUNCATION_LOSS",
    "NonConvergedError",
    "OptimizationRecord",
    "OptimizerConfig",
    "PhaseGateDecomposition",
    "QualityReport",
    "QuadratureGrid",
    "ResourceLimitError",
    "SQRT_PI",
    "TENSOR_DIMENSION_CAP",
    "THRESHOLD_DELTA",
    "THRESHOLD_SQUEEZING_DB",
    "TargetBuild",
    "UnsupportedGateError",
    "annihilation",
    "apply_gate",
    "apply_product_phase",
    "batch_fidelity_and_gradient",
    "build_target",
    "controlled_phase",
    "creation",
    "cutoff_for_leakage",
    "delta_from_db",
    "ec_round",
    "error_probability",
    "evaluate_wavefunction",
    "expectation",
    "fidelity",
    "fidelity_and_gradient",
    "fidelity_gradient",
    "fold_half_open",
    "forward",
    "fourier",
    "gate",
    "generator_apply",
    "hermite_table",
    "momentum",
    "number_operator",
    "optimize",
    "pauli_x",
    "pauli_z",
    "phase_gate",
    "phase_gate_params",
    "position",
    "select_cutoff",
    "squeezed_vacuum",
    "squeezing_db",
    "target_state",
    "tensor",
    "tensor_op",
    "twirled_error_probability",
    "twirled_error_probability_quadrature",
    "validate_leakage",
    "wavefunction",
    "zak_overlap",
    "zak_transform",
]
