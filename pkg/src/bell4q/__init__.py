"""Four-qubit Bell inequality violations and teleportation-resource analysis."""

from .inequalities import (
    BellExpression,
    BellTerm,
    SettingsAssignment,
    algebraic_max,
    attained_values,
    builtin,
    builtin_settings,
    classical_bound,
    evaluate,
)
from .optimize import OptimizationConfig, Optimum, max_violation, scan_upsilon
from .qstate import (
    ConsistencyError,
    DensityOperator,
    MeasurementDirection,
    PureState,
    ValidationError,
    expectation,
    negativity,
    partial_transpose,
    pauli_observable,
    permute_qubits,
    tensor_observable,
)
from .states import (
    ChannelStateParams,
    bell_pair,
    chi,
    cluster4,
    ghz4,
    state_from_id,
    upsilon,
    w4,
    werner,
    xi_channel,
)
from .teleport import (
    CriticalVisibilities,
    bi1_critical_visibility,
    chsh_max_two_qubit,
    critical_visibilities,
    input_state,
    output_state,
    singlet_fraction_closed,
    singlet_fraction_numeric,
    werner_baseline,
)

__version__ = "0.1.0"

__all__ = [
    "BellExpression",
    "BellTerm",
    "ChannelStateParams",
    "ConsistencyError",
    "CriticalVisibilities",
    "DensityOperator",
    "MeasurementDirection",
    "OptimizationConfig",
    "Optimum",
    "PureState",
    "SettingsAssignment",
    "ValidationError",
    "algebraic_max",
    "attained_values",
    "bell_pair",
    "bi1_critical_visibility",
    "builtin",
    "builtin_settings",
    "chi",
    "chsh_max_two_qubit",
    "classical_bound",
    "cluster4",
    "critical_visibilities",
    "evaluate",
    "expectation",
    "ghz4",
    "input_state",
    "max_violation",
    "negativity",
    "output_state",
    "partial_transpose",
    "pauli_observable",
    "permute_qubits",
    "scan_upsilon",
    "singlet_fraction_closed",
    "singlet_fraction_numeric",
    "state_from_id",
    "tensor_observable",
    "upsilon",
    "w4",
    "werner",
    "werner_baseline",
    "xi_channel",
]
