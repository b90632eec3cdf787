"""Deterministic teleportation of an arbitrary two-qubit state through |4;2>.

Joint register order is ``p q 1 2 3 4``: the secret on qubits 0-1 and the
channel on qubits 2-5.  Alice measures ``(p, q, 1, 3)`` and Bob keeps
``(2, 4)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ArgumentError, BasisError, ChannelError
from .magnon import TELEPORT, build_4_2, build_4_2_prime, check_constraints, protocol_residuals
from .magnon import ConstraintReport, as_amplitudes
from .qcore import (
    StateVector,
    apply_matrix,
    fidelity,
    gram_matrix,
    max_offdiagonal,
    pauli_string,
    project_measure,
    tensor,
)

# operator pairs (M_i, N_i) for i = 1..16
PAULI_PAIRS = (
    (0, 0), (0, 3), (3, 0), (3, 3),
    (1, 0), (1, 3), (2, 3), (2, 0),
    (0, 1), (0, 2), (3, 1), (3, 2),
    (1, 1), (2, 1), (1, 2), (2, 2),
)

ALICE_QUBITS = (0, 1, 2, 4)
BOB_QUBITS = (3, 5)
FIDELITY_TOL = 1e-9

_ALL_PAIRS = tuple((a, b) for a in range(4) for b in range(4))


class IndexConvention(enum.Enum):
    """How Bob picks his correction for branch i.

    ONE_BASED_WRAP: the tabulated (N_i (x) M_j)^-1 with j = ((i + 7) mod 16) + 1;
      if that fails on any branch the run falls back to SEARCH.
    SEARCH: per-branch search over all 16 Pauli pairs.
    """

    ONE_BASED_WRAP = "one-based-wrap"
    SEARCH = "search"


@dataclass(frozen=True)
class TwoQubitSecret:
    a00: complex
    a01: complex
    a10: complex
    a11: complex

    def state(self) -> StateVector:
        return StateVector([self.a00, self.a01, self.a10, self.a11])

    @classmethod
    def random(cls, rng: np.random.Generator) -> "TwoQubitSecret":
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        return cls(*v)

    def to_json(self) -> list:
        return [[complex(x).real, complex(x).imag] for x in (self.a00, self.a01, self.a10, self.a11)]


def partner_row(i: int) -> int:
    """Row paired with i under the one-based reading of (i + 8) mod 16."""
    if not 1 <= i <= 16:
        raise ArgumentError(f"branch index must be 1..16, got {i}")
    return (i + 7) % 16 + 1


def bob_correction(i: int, convention: IndexConvention = IndexConvention.ONE_BASED_WRAP) -> np.ndarray:
    """The tabulated correction (N_i (x) M_j)^-1 on Bob's qubits (2, 4).

    Pauli matrices are their own inverses, so no numerical inversion is done.
    """
    if convention is not IndexConvention.ONE_BASED_WRAP:
        raise ArgumentError("only the table convention yields a channel-independent correction")
    return pauli_string(*table_correction_pair(i))


def table_correction_pair(i: int) -> tuple[int, int]:
    return (PAULI_PAIRS[i - 1][1], PAULI_PAIRS[partner_row(i) - 1][0])


def _secret_of(secret) -> StateVector:
    if isinstance(secret, TwoQubitSecret):
        return secret.state()
    if isinstance(secret, StateVector):
        return secret
    return StateVector(secret)


def alice_basis(w) -> list[StateVector]:
    """(M_i (x) N_i (x) I (x) I)|4;2>' on (p, q, 1, 3), i = 1..16."""
    w = as_amplitudes(w)
    report = check_constraints(w, TELEPORT)
    if not report.passed:
        raise ChannelError("channel fails the teleportation relations: " + ", ".join(report.failing()), report)
    return _alice_basis_unchecked(w)


def _alice_basis_unchecked(w) -> list[StateVector]:
    prime = build_4_2_prime(w).amplitudes
    return [StateVector(apply_matrix(prime, pauli_string(m, n), [0, 1])) for m, n in PAULI_PAIRS]


def partition_basis(w, alice_channel: Sequence[int]) -> list[StateVector]:
    """Alice's measurement basis when she holds ``alice_channel`` of the channel.

    With the channel written as sum K[x, y]|x>_Alice|y>_Bob, element k has
    coefficient matrix sigma_k K^T over (secret, Alice's channel qubits).
    Orthonormal iff 2K is unitary; Bob then receives sigma_k |psi>.
    """
    alice_channel = [int(q) for q in alice_channel]
    if len(alice_channel) != 2 or len(set(alice_channel)) != 2 or not set(alice_channel) <= {0, 1, 2, 3}:
        raise ArgumentError(f"Alice needs two distinct channel qubits, got {alice_channel}")
    bob = [q for q in range(4) if q not in alice_channel]
    k = build_4_2(w).amplitudes.reshape((2,) * 4).transpose(alice_channel + bob).reshape(4, 4)
    return [StateVector((pauli_string(a, b) @ k.T).reshape(-1)) for a, b in _ALL_PAIRS]


def branch_operators(w, basis: Sequence[StateVector], alice_qubits: Sequence[int] = ALICE_QUBITS) -> list[np.ndarray]:
    """For each outcome, the 4x4 map taking the secret to Bob's unnormalized state."""
    channel = build_4_2(w)
    cols: list[list[np.ndarray]] = [[] for _ in basis]
    for k in range(4):
        e = StateVector.basis(format(k, "02b"))
        for rec in project_measure(tensor(e, channel), basis, alice_qubits):
            v = np.zeros(4, complex) if rec.post_state is None else rec.post_state.amplitudes * np.sqrt(rec.probability)
            cols[rec.outcome_index].append(v)
    return [np.array(c).T for c in cols]


def proportionality_residual(op: np.ndarray, target: np.ndarray) -> float:
    """Relative distance of ``op`` from the nearest multiple of ``target``."""
    norm = np.linalg.norm(op)
    if norm == 0:
        return 1.0
    c = np.vdot(target, op) / np.vdot(target, target)
    return float(np.linalg.norm(op - c * target) / norm)


def find_pauli_correction(op: np.ndarray, target: Optional[np.ndarray] = None) -> tuple[tuple[int, int], float]:
    """Pauli pair P minimizing the distance of P @ op from a multiple of ``target``.

    Ties resolve to the first pair in (sigma_0..sigma_3)^2 order.
    """
    target = np.eye(op.shape[0]) if target is None else target
    best, best_r = (0, 0), np.inf
    for pair in _ALL_PAIRS:
        r = proportionality_residual(pauli_string(*pair) @ op, target)
        if r < best_r - 1e-12:
            best, best_r = pair, r
    return best, best_r


@dataclass(frozen=True)
class TeleportBranch:
    index: int
    pair: tuple[int, int]
    probability: float
    table_correction: tuple[int, int]
    table_fidelity: float
    correction: tuple[int, int]
    fidelity: float

    def to_json(self) -> dict:
        return {
            "i": self.index,
            "M": self.pair[0],
            "N": self.pair[1],
            "probability": self.probability,
            "table_correction": list(self.table_correction),
            "table_fidelity": self.table_fidelity,
            "correction": list(self.correction),
            "fidelity": self.fidelity,
        }


@dataclass
class TeleportReport:
    constraint: ConstraintReport
    protocol: ConstraintReport
    gram_deviation: float
    correction_source: str
    branches: list[TeleportBranch] = field(default_factory=list)
    failure: Optional[str] = None
    tolerance: float = FIDELITY_TOL

    @property
    def min_fidelity(self) -> float:
        return min((b.fidelity for b in self.branches), default=0.0)

    @property
    def passed(self) -> bool:
        return (
            self.failure is None
            and len(self.branches) == 16
            and all(abs(b.fidelity - 1.0) <= self.tolerance for b in self.branches)
        )

    def to_json(self) -> dict:
        return {
            "constraint": self.constraint.to_json(),
            "protocol": self.protocol.to_json(),
            "gram_deviation": self.gram_deviation,
            "correction_source": self.correction_source,
            "failure": self.failure,
            "min_fidelity": self.min_fidelity,
            "branches": [b.to_json() for b in self.branches],
            "pass": self.passed,
        }


def discover_corrections(w, basis: Optional[Sequence[StateVector]] = None) -> list[tuple[tuple[int, int], float]]:
    """Per-branch Pauli correction found from Bob's branch maps (secret independent)."""
    basis = _alice_basis_unchecked(w) if basis is None else basis
    out = []
    for op in branch_operators(w, basis):
        out.append(find_pauli_correction(op))
    return out


def _corrected_fidelity(post: StateVector, pair, secret: StateVector) -> float:
    return fidelity(StateVector(pauli_string(*pair) @ post.amplitudes), secret)


def run_teleport(
    secret,
    w,
    convention: IndexConvention = IndexConvention.ONE_BASED_WRAP,
    tolerance: float = FIDELITY_TOL,
) -> TeleportReport:
    """Simulate every measurement branch and Bob's correction."""
    w = as_amplitudes(w)
    psi = _secret_of(secret)
    report = check_constraints(w, TELEPORT)
    if not report.passed:
        raise ChannelError("channel fails the teleportation relations: " + ", ".join(report.failing()), report)
    protocol = protocol_residuals(w, TELEPORT)
    basis = _alice_basis_unchecked(w)
    dev = max_offdiagonal(gram_matrix(basis))
    out = TeleportReport(report, protocol, dev, convention.value, tolerance=tolerance)
    try:
        records = project_measure(tensor(psi, build_4_2(w)), basis, ALICE_QUBITS)
    except BasisError as exc:
        out.failure = f"Alice's basis is not orthonormal (max overlap {dev:.3g}): {exc}"
        return out

    ops = branch_operators(w, basis)
    tabulated = [table_correction_pair(i) for i in range(1, 17)]
    if convention is IndexConvention.ONE_BASED_WRAP:
        ok = all(proportionality_residual(pauli_string(*p) @ op, np.eye(4)) < tolerance for p, op in zip(tabulated, ops))
        if ok:
            chosen = tabulated
        else:
            chosen = [find_pauli_correction(op)[0] for op in ops]
            out.correction_source = "search"
    else:
        chosen = [find_pauli_correction(op)[0] for op in ops]

    for rec, pp, cp in zip(records, tabulated, chosen):
        i = rec.outcome_index + 1
        if rec.post_state is None:
            pf = f = 0.0
        else:
            pf = _corrected_fidelity(rec.post_state, pp, psi)
            f = _corrected_fidelity(rec.post_state, cp, psi)
        out.branches.append(TeleportBranch(i, PAULI_PAIRS[i - 1], rec.probability, pp, pf, cp, f))
    return out


def run_teleport_partition(secret, w, alice_channel: Sequence[int] = (0, 1), tolerance: float = FIDELITY_TOL) -> TeleportReport:
    """Teleport with Alice holding ``alice_channel`` (0-based channel qubits).

    Corrections are always found by search over Pauli pairs.
    """
    w = as_amplitudes(w)
    psi = _secret_of(secret)
    basis = partition_basis(w, alice_channel)
    alice = (0, 1) + tuple(2 + q for q in alice_channel)
    dev = max_offdiagonal(gram_matrix(basis))
    out = TeleportReport(check_constraints(w, TELEPORT), protocol_residuals(w, TELEPORT), dev, "search", tolerance=tolerance)
    try:
        records = project_measure(tensor(psi, build_4_2(w)), basis, alice)
    except BasisError as exc:
        out.failure = f"channel is not maximally entangled across the partition: {exc}"
        return out
    ops = branch_operators(w, basis, alice)
    for rec, op in zip(records, ops):
        pair, _ = find_pauli_correction(op)
        f = 0.0 if rec.post_state is None else _corrected_fidelity(rec.post_state, pair, psi)
        k = rec.outcome_index
        out.branches.append(TeleportBranch(k + 1, _ALL_PAIRS[k], rec.probability, pair, f, pair, f))
    return out
