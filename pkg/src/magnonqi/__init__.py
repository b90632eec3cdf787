"""Exact state-vector simulation of protocols over the four-qubit two-magnon channel."""

from .errors import (
    ArgumentError,
    BasisError,
    ChannelError,
    CircuitDiscrepancy,
    InfeasibleError,
    MagnonError,
    MatrixError,
    NormalizationError,
    UnitarityError,
    UnresolvedConstraintError,
)
from .magnon import (
    DENSE_CODING,
    TELEPORT,
    ConstraintFamily,
    ConstraintReport,
    Eq13Interpretation,
    Family,
    MagnonAmplitudes,
    build_4_2,
    build_4_2_prime,
    build_w_prime,
    check_constraints,
    protocol_residuals,
    qis_family,
    sample_amplitudes,
)
from .qcore import (
    DensityMatrix,
    MeasurementRecord,
    StateVector,
    apply_gate,
    entanglement_entropy,
    fidelity,
    partial_trace,
    project_measure,
    tensor,
    von_neumann_entropy,
)

__version__ = "0.1.0"
