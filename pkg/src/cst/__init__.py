"""Teleportation through two noisy channels in a causal-order superposition.

Closed-form figures of merit, a brute-force circuit oracle that validates
them, a measurement optimizer and sweep/CLI tooling. See the README for the
command-line interface; the Python surface is re-exported here.
"""

from ._version import __version__
from .analytic import (
    NullProbabilityError,
    SwitchWeights,
    TeleportResult,
    evaluate,
    evaluate_orthogonal,
    pauli_trace_tables,
    switch_weights,
    unnormalized_output,
    weight_response,
)
from .model import (
    ControlSpec,
    MeasurementSpec,
    NoiseSpec,
    PureQubit,
    bell_state,
    control_density,
    input_density,
    measurement_ket,
    measurement_ket_orthogonal,
    pauli,
)
from .optimizer import (
    AllPointsNullError,
    DEFAULT_PROBE,
    OptimizeConfig,
    OptimumReport,
    closed_form_candidate,
    optimize_measurement,
)
from .oracle import (
    KrausSet,
    kraus_from_noise,
    simulate,
    simulate_orthogonal,
    single_channel,
    switch_kraus,
)

__all__ = [
    "__version__",
    "AllPointsNullError",
    "ControlSpec",
    "DEFAULT_PROBE",
    "KrausSet",
    "MeasurementSpec",
    "NoiseSpec",
    "NullProbabilityError",
    "OptimizeConfig",
    "OptimumReport",
    "PureQubit",
    "SwitchWeights",
    "TeleportResult",
    "bell_state",
    "closed_form_candidate",
    "control_density",
    "evaluate",
    "evaluate_orthogonal",
    "input_density",
    "kraus_from_noise",
    "measurement_ket",
    "measurement_ket_orthogonal",
    "optimize_measurement",
    "pauli",
    "pauli_trace_tables",
    "simulate",
    "simulate_orthogonal",
    "single_channel",
    "switch_kraus",
    "switch_weights",
    "unnormalized_output",
    "weight_response",
]
