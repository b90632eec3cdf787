"""Gate lists as data, and their execution on a state vector."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ArgumentError
from .qcore import HADAMARD, SIGMA, StateVector, apply_matrix, as_state, controlled

GATE_MATRICES = {
    "I": SIGMA[0],
    "X": SIGMA[1],
    "Y": SIGMA[2],
    "Z": SIGMA[3],
    "H": HADAMARD,
}


@dataclass(frozen=True)
class Gate:
    """A parameter-free gate, optionally multi-controlled on |1>."""

    name: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        if self.name not in GATE_MATRICES:
            raise ArgumentError(f"unknown gate {self.name!r}")
        if set(self.targets) & set(self.controls):
            raise ArgumentError(f"gate {self} uses a qubit as both control and target")

    def to_json(self) -> dict:
        return {"gate": self.name, "targets": list(self.targets), "controls": list(self.controls)}

    @classmethod
    def from_json(cls, d: dict) -> "Gate":
        return cls(d["gate"], tuple(d["targets"]), tuple(d.get("controls", ())))


def _expand(gate: Gate):
    # one single-qubit gate per target, all sharing the controls
    u = GATE_MATRICES[gate.name]
    for t in gate.targets:
        yield controlled(u, len(gate.controls)), gate.controls + (t,)


def run_circuit(state, gates: Sequence[Gate]) -> StateVector:
    s = as_state(state)
    n = s.num_qubits
    amps = s.amplitudes.copy()
    for g in gates:
        for q in g.targets + g.controls:
            if not 0 <= q < n:
                raise IndexError(f"{g} addresses qubit {q} on a {n}-qubit register")
        for matrix, qubits in _expand(g):
            amps = apply_matrix(amps, matrix, qubits)
    return StateVector(amps)


def circuit_to_json(gates: Sequence[Gate]) -> list[dict]:
    return [g.to_json() for g in gates]
