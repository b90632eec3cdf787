"""Three-spin Heisenberg exchange: H = J S_A.S_B + J S_B.S_C + J Delta S_A.S_C.

Spins are S = sigma/2 with hbar = 1, qubit order A B C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .qcore import SIGMA, StateVector, as_state, kron

INITIAL_STATE = "100"
_ONE_MAGNON = (0b100, 0b010, 0b001)


@dataclass(frozen=True)
class HeisenbergParams:
    J: float
    delta: float = 1.0
    t: float = 0.0

    def to_json(self) -> dict:
        return {"J": self.J, "delta": self.delta, "t": self.t}


def _spin(axis: int, site: int) -> np.ndarray:
    ops = [SIGMA[0]] * 3
    ops[site] = SIGMA[axis] / 2
    return kron(*ops)


def _dot(i: int, j: int) -> np.ndarray:
    return sum(_spin(a, i) @ _spin(a, j) for a in (1, 2, 3))


def build_h(p: HeisenbergParams) -> np.ndarray:
    h = p.J * _dot(0, 1) + p.J * _dot(1, 2) + p.J * p.delta * _dot(0, 2)
    return (h + h.conj().T) / 2


def total_sz() -> np.ndarray:
    return sum(_spin(3, k) for k in range(3))


def total_s2() -> np.ndarray:
    return sum(np.linalg.matrix_power(sum(_spin(a, k) for k in range(3)), 2) for a in (1, 2, 3))


def evolution_operator(p: HeisenbergParams) -> np.ndarray:
    """exp(-iHt) from the Hermitian eigendecomposition."""
    if p.J == 0:
        raise ArgumentError("J must be nonzero")
    vals, vecs = np.linalg.eigh(build_h(p))
    return (vecs * np.exp(-1j * vals * p.t)) @ vecs.conj().T


def evolve(s, p: HeisenbergParams) -> StateVector:
    s = as_state(s)
    if s.num_qubits != 3:
        raise ArgumentError(f"evolution acts on 3 qubits, got {s.num_qubits}")
    return StateVector(evolution_operator(p) @ s.amplitudes)


def energy(s, h: np.ndarray) -> float:
    a = as_state(s).amplitudes
    return float(np.vdot(a, h @ a).real)


def sector_weights(s) -> np.ndarray:
    """Population of each Hamming-weight sector 0..n."""
    s = as_state(s)
    probs = np.abs(s.amplitudes) ** 2
    out = np.zeros(s.num_qubits + 1)
    for idx, pr in enumerate(probs):
        out[bin(idx).count("1")] += pr
    return out


def t_star(J: float) -> float:
    """Time at which |100> evolves into a W-type state for Delta = 1."""
    if J == 0:
        raise ArgumentError("J must be nonzero")
    return 2.0 / (3.0 * J) * math.acos(1.0 / 8.0)


@dataclass(frozen=True)
class WGenerationReport:
    params: HeisenbergParams
    alpha: complex
    beta: complex
    gamma: complex
    one_magnon_weight: float
    teleport_condition_residual: float
    initial_state: str = INITIAL_STATE

    def to_json(self) -> dict:
        c = lambda z: [z.real, z.imag]  # noqa: E731
        return {
            "params": self.params.to_json(),
            "assumption_initial_state": self.initial_state,
            "coefficients": {"alpha": c(self.alpha), "beta": c(self.beta), "gamma": c(self.gamma)},
            "abs2": [abs(self.alpha) ** 2, abs(self.beta) ** 2, abs(self.gamma) ** 2],
            "one_magnon_weight": self.one_magnon_weight,
            "teleport_condition_residual": self.teleport_condition_residual,
        }


def w_generation_check(J: float = 1.0) -> WGenerationReport:
    """Evolve |100> at Delta = 1 to t_star(J) and report the W-type coefficients.

    Diagnostic only: the residual ||alpha|^2 + |beta|^2 - |gamma|^2| is
    reported, not required to vanish.
    """
    p = HeisenbergParams(J, 1.0, t_star(J))
    out = evolve(StateVector.basis(INITIAL_STATE), p).amplitudes
    a, b, g = (complex(out[i]) for i in _ONE_MAGNON)
    weight = abs(a) ** 2 + abs(b) ** 2 + abs(g) ** 2
    return WGenerationReport(p, a, b, g, float(weight), abs(abs(a) ** 2 + abs(b) ** 2 - abs(g) ** 2))
