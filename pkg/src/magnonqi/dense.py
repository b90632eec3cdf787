"""Superdense coding over |4;2>: Alice holds channel qubits 1 and 3.

Qubit indices in this module are 0-based channel positions, so the
standard sender partition is ``(0, 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .circuit import Gate, run_circuit
from .errors import ArgumentError, ChannelError, CircuitDiscrepancy
from .magnon import (
    DENSE_CODING,
    KEYS,
    BASIS_4_2,
    ConstraintReport,
    MagnonAmplitudes,
    as_amplitudes,
    build_4_2,
    check_constraints,
    protocol_residuals,
)
from .qcore import (
    SIGMA,
    StateVector,
    apply_matrix,
    gram_matrix,
    kron,
    max_offdiagonal,
    reduced_density,
    von_neumann_entropy,
)
from .teleport import PAULI_PAIRS

# sigma_2 enters as i*sigma_2 so every encoding operator is real
ENCODING_OPS = (SIGMA[0], SIGMA[1], 1j * SIGMA[2], SIGMA[3])
ALICE_QUBITS = (0, 2)
ORTHOGONALITY_TOL = 1e-10


def encoding_operator(i: int) -> np.ndarray:
    """M_i (x) I (x) N_i (x) I on the channel qubits 1234."""
    if not 1 <= i <= 16:
        raise ArgumentError(f"encoding index must be 1..16, got {i}")
    m, n = PAULI_PAIRS[i - 1]
    return kron(ENCODING_OPS[m], SIGMA[0], ENCODING_OPS[n], SIGMA[0])


def _encode(i: int, channel: np.ndarray) -> StateVector:
    m, n = PAULI_PAIRS[i - 1]
    return StateVector(apply_matrix(channel, np.kron(ENCODING_OPS[m], ENCODING_OPS[n]), ALICE_QUBITS))


def encode(i: int, w) -> StateVector:
    w = as_amplitudes(w)
    if not 1 <= i <= 16:
        raise ArgumentError(f"encoding index must be 1..16, got {i}")
    report = check_constraints(w, DENSE_CODING)
    if not report.passed:
        raise ChannelError("channel fails the dense-coding relations: " + ", ".join(report.failing()), report)
    return _encode(i, build_4_2(w).amplitudes)


def encodings(w) -> list[StateVector]:
    """All 16 encoded states, without any constraint check."""
    channel = build_4_2(w).amplitudes
    return [_encode(i, channel) for i in range(1, 17)]


def distinguishability(w) -> float:
    """Largest |<e_i|e_j>| over distinct encodings; zero means perfectly distinguishable."""
    return max_offdiagonal(gram_matrix(encodings(w)))


def holevo_capacity(w, alice_qubits: Iterable[int] = ALICE_QUBITS) -> float:
    """log2 d_A + S(rho_B) - S(rho_AB) for the pure channel state, in bits."""
    alice = sorted(set(alice_qubits))
    if not alice or not set(alice) <= {0, 1, 2, 3}:
        raise ArgumentError(f"invalid sender qubits {alice}")
    s = build_4_2(w)
    bob = [q for q in range(4) if q not in alice]
    s_ab = von_neumann_entropy(s.density())
    s_b = von_neumann_entropy(reduced_density(s, bob)) if bob else 0.0
    return len(alice) + s_b - s_ab


@dataclass
class DenseReport:
    constraint: ConstraintReport
    protocol: ConstraintReport
    distinguishability: float
    capacity: float
    tolerance: float = ORTHOGONALITY_TOL

    @property
    def passed(self) -> bool:
        return (
            self.constraint.passed
            and self.distinguishability < self.tolerance
            and abs(self.capacity - 4.0) < 1e-9
        )

    def to_json(self) -> dict:
        return {
            "constraint": self.constraint.to_json(),
            "protocol": self.protocol.to_json(),
            "distinguishability": self.distinguishability,
            "holevo_capacity": self.capacity,
            "pass": self.passed,
        }


def run_dense(w, tolerance: float = ORTHOGONALITY_TOL) -> DenseReport:
    w = as_amplitudes(w)
    return DenseReport(
        check_constraints(w, DENSE_CODING),
        protocol_residuals(w, DENSE_CODING),
        distinguishability(w),
        holevo_capacity(w),
        tolerance,
    )


# Register qubits 0-3 are channel qubits 1-4; qubit 4 is the ancilla.
# Transcribed column by column from the generation circuit figure.
_A = 4
FIG1_CIRCUIT = (
    Gate("H", (2,)),
    Gate("H", (3,)),
    Gate("X", (_A,), (3,)),
    Gate("X", (_A,), (2,)),
    Gate("X", (1,), (_A,)),
    Gate("X", (0,), (_A,)),
    Gate("X", (0,), (3, _A)),
    Gate("X", (1,), (2, _A)),
    Gate("X", (_A,), (0,)),
    Gate("X", (_A,), (1,)),
    Gate("X", (_A,)),
    Gate("X", (_A,), (2,)),
    Gate("X", (_A,), (1,)),
    Gate("X", (0, 3), (_A,)),
    Gate("H", (3,), (_A,)),
    Gate("X", (1,), (_A,)),
    Gate("X", (1,), (3, _A)),
    Gate("X", (_A,), (2,)),
    Gate("X", (_A,), (0,)),
)


@dataclass
class Fig1Diagnostics:
    """What the transcribed generation circuit actually produces."""

    final_state: StateVector
    ancilla_excitation: float
    sector_leakage: float
    readout: MagnonAmplitudes
    constraint: ConstraintReport
    protocol: ConstraintReport
    capacity: float

    @property
    def ancilla_ok(self) -> bool:
        return self.ancilla_excitation < ORTHOGONALITY_TOL

    def to_json(self) -> dict:
        return {
            "ancilla_excitation": self.ancilla_excitation,
            "ancilla_ok": self.ancilla_ok,
            "sector_leakage": self.sector_leakage,
            "readout_amplitudes": self.readout.to_json(),
            "constraint": self.constraint.to_json(),
            "protocol": self.protocol.to_json(),
            "holevo_capacity_of_readout": self.capacity,
        }


def fig1_diagnostics() -> Fig1Diagnostics:
    """Run the circuit from |00000> and inspect the output.

    ``readout`` takes each register amplitude summed coherently over both
    ancilla values, which is the state the circuit would make if the ancilla
    came back to |0>.
    """
    out = run_circuit(StateVector.basis("00000"), FIG1_CIRCUIT)
    amps = out.amplitudes.reshape(16, 2)
    excitation = float(np.sum(np.abs(amps[:, 1]) ** 2))
    weight2 = np.array([bin(i).count("1") == 2 for i in range(16)])
    leakage = float(np.sum(np.abs(amps[~weight2]) ** 2))
    coherent = amps.sum(axis=1)
    readout = MagnonAmplitudes.from_mapping({k: coherent[int(BASIS_4_2[k], 2)] for k in KEYS})
    return Fig1Diagnostics(
        out,
        excitation,
        leakage,
        readout,
        check_constraints(readout, DENSE_CODING),
        protocol_residuals(readout, DENSE_CODING),
        holevo_capacity(readout),
    )


def fig1_generate() -> tuple[StateVector, bool]:
    """The 4-qubit channel made by the generation circuit.

    Raises CircuitDiscrepancy, with the diagnostics attached, unless the
    ancilla returns to |0>, the output stays in the two-magnon sector and it
    passes the dense-coding relations.
    """
    d = fig1_diagnostics()
    problems = []
    if not d.ancilla_ok:
        problems.append(f"ancilla left excited with probability {d.ancilla_excitation:.6g}")
    if d.sector_leakage > ORTHOGONALITY_TOL:
        problems.append(f"weight outside the two-magnon sector {d.sector_leakage:.3g}")
    if not d.constraint.passed:
        problems.append("dense-coding relations fail: " + ", ".join(d.constraint.failing()))
    if problems:
        raise CircuitDiscrepancy("; ".join(problems), d)
    register = StateVector(d.final_state.amplitudes.reshape(16, 2)[:, 0])
    return register, True

