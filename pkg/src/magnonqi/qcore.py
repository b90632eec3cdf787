"""Dense state-vector and density-matrix kernel.

Qubit 0 is the leftmost ket label and the most significant bit of the
amplitude index, so ``|q0 q1 ... q(n-1)>`` maps to index ``int("q0q1...", 2)``.
All registers here are small (at most a handful of qubits), so everything is
plain dense numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ArgumentError,
    BasisError,
    MatrixError,
    NormalizationError,
    UnitarityError,
)

ATOL = 1e-10
EIG_CUTOFF = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


SIGMA = (
    _frozen([[1, 0], [0, 1]]),
    _frozen([[0, 1], [1, 0]]),
    _frozen([[0, -1j], [1j, 0]]),
    _frozen([[1, 0], [0, -1]]),
)
HADAMARD = _frozen(np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def pauli(index: int) -> np.ndarray:
    """Return sigma_index, with sigma_0 the identity."""
    if index not in (0, 1, 2, 3):
        raise ArgumentError(f"Pauli index must be 0..3, got {index!r}")
    return SIGMA[index]


def kron(*matrices) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in matrices:
        out = np.kron(out, m)
    return out


def pauli_string(*indices: int) -> np.ndarray:
    """Tensor product sigma_{i0} (x) sigma_{i1} (x) ..."""
    return kron(*(pauli(i) for i in indices))


def _num_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ArgumentError(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _num_qubits_for(amps.size)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL:
            raise NormalizationError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def normalized(cls, vector) -> "StateVector":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm < 1e-300:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(v / norm)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        v = np.zeros(1 << len(bits), dtype=complex)
        v[int(bits, 2)] = 1.0
        return cls(v)

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.amplitudes.size)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def amplitude(self, bits: str) -> complex:
        return complex(self.amplitudes[int(bits, 2)])

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def __repr__(self):
        nz = [
            f"{complex(a):.4g}|{i:0{self.num_qubits}b}>"
            for i, a in enumerate(self.amplitudes)
            if abs(a) > 1e-12
        ]
        return "StateVector(" + " + ".join(nz) + ")"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Square 2^n x 2^n operator; validity is checked on demand by ``validate``."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ArgumentError(f"density matrix must be square, got {m.shape}")
        _num_qubits_for(m.shape[0])
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.entries.shape[0])

    def validate(self, atol: float = ATOL) -> None:
        m = self.entries
        if np.abs(m - m.conj().T).max() > atol:
            raise MatrixError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > atol:
            raise MatrixError(f"density matrix trace is {np.trace(m)!r}")
        if np.linalg.eigvalsh(m).min() < -atol:
            raise MatrixError("density matrix has a negative eigenvalue")


def as_state(s) -> StateVector:
    return s if isinstance(s, StateVector) else StateVector(s)


def as_density(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    if isinstance(rho, StateVector):
        return rho.density()
    return DensityMatrix(rho)


def tensor(a, b) -> StateVector:
    """Return a (x) b; a's qubits take the more significant positions."""
    a, b = as_state(a), as_state(b)
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def is_unitary(matrix, atol: float = ATOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() <= atol)


def controlled(matrix, num_controls: int = 1) -> np.ndarray:
    """Controlled-U with the controls preceding U's qubits in the ordering."""
    u = np.asarray(matrix, dtype=complex)
    dim = (1 << num_controls) * u.shape[0]
    out = np.eye(dim, dtype=complex)
    out[-u.shape[0]:, -u.shape[0]:] = u
    return out


def _check_targets(targets: Sequence[int], n: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise IndexError(f"repeated qubit in targets {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise IndexError(f"qubit {t} out of range for a {n}-qubit register")
    return targets


def apply_matrix(amplitudes: np.ndarray, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Apply ``matrix`` on ``targets`` to a raw amplitude vector (no checks)."""
    n = _num_qubits_for(amplitudes.size)
    k = len(targets)
    psi = amplitudes.reshape((2,) * n)
    op = np.asarray(matrix, dtype=complex).reshape((2,) * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(targets)))
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    return psi.reshape(-1)


def apply_gate(s, matrix, targets: Sequence[int]) -> StateVector:
    """Apply a 2^k x 2^k unitary on the ordered qubits ``targets``.

    ``targets[0]`` is the most significant qubit of ``matrix``'s index.
    """
    s = as_state(s)
    m = np.asarray(matrix, dtype=complex)
    targets = _check_targets(targets, s.num_qubits)
    if m.shape != (1 << len(targets),) * 2:
        raise ArgumentError(f"matrix shape {m.shape} does not match {len(targets)} targets")
    if not is_unitary(m):
        raise UnitarityError("gate matrix is not unitary")
    return StateVector(apply_matrix(s.amplitudes, m, targets))


def partial_trace(rho, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on ``keep`` (returned in ascending qubit order)."""
    rho = as_density(rho)
    n = rho.num_qubits
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ArgumentError("keep set must be nonempty")
    _check_targets(keep, n)
    drop = [q for q in range(n) if q not in keep]
    t = rho.entries.reshape((2,) * (2 * n))
    perm = keep + drop + [n + q for q in keep] + [n + q for q in drop]
    dk, dd = 1 << len(keep), 1 << len(drop)
    t = t.transpose(perm).reshape(dk, dd, dk, dd)
    return DensityMatrix(np.einsum("ajbj->ab", t))


def reduced_density(s, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace of a pure state without forming the full projector."""
    s = as_state(s)
    n = s.num_qubits
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ArgumentError("keep set must be nonempty")
    _check_targets(keep, n)
    drop = [q for q in range(n) if q not in keep]
    m = s.amplitudes.reshape((2,) * n).transpose(keep + drop).reshape(1 << len(keep), -1)
    return DensityMatrix(m @ m.conj().T)


def von_neumann_entropy(rho, cutoff: float = EIG_CUTOFF) -> float:
    """-sum(lambda log2 lambda) over eigenvalues above ``cutoff``, in bits."""
    m = as_density(rho).entries
    if np.abs(m - m.conj().T).max() > ATOL:
        raise MatrixError("entropy requires a Hermitian matrix")
    ev = np.linalg.eigvalsh(m)
    ev = ev[ev > cutoff]
    return float(max(-(ev * np.log2(ev)).sum(), 0.0))


def entanglement_entropy(s, subsystem: Iterable[int]) -> float:
    return von_neumann_entropy(reduced_density(s, subsystem))


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """One outcome of a projective measurement.

    ``post_state`` lives on the unmeasured qubits in ascending order; it is
    None when the outcome has zero probability, for the residual record of an
    incomplete basis, and when every qubit was measured.
    """

    outcome_index: int
    probability: float
    post_state: Optional[StateVector]


def _basis_matrix(basis, k: int) -> np.ndarray:
    rows = np.array([as_state(b).amplitudes for b in basis])
    if rows.ndim != 2 or rows.shape[1] != 1 << k:
        raise BasisError(f"basis vectors must act on {k} qubits")
    gram = rows.conj() @ rows.T
    if np.abs(gram - np.eye(len(rows))).max() > ATOL:
        raise BasisError("measurement basis is not orthonormal")
    return rows


def project_measure(
    s,
    basis,
    subset: Sequence[int],
    complete: bool = True,
) -> list[MeasurementRecord]:
    """Measure the qubits ``subset`` (in the listed order) in ``basis``.

    With ``complete=False`` a basis spanning only part of the space is
    accepted, and one extra record (index ``len(basis)``) carries the
    leftover probability.
    """
    s = as_state(s)
    n = s.num_qubits
    subset = _check_targets(subset, n)
    k = len(subset)
    rows = _basis_matrix(basis, k)
    if complete and len(rows) != 1 << k:
        raise BasisError(f"basis has {len(rows)} vectors, a complete one needs {1 << k}")
    rest = [q for q in range(n) if q not in subset]
    m = s.amplitudes.reshape((2,) * n).transpose(subset + rest).reshape(1 << k, -1)
    records = []
    total = 0.0
    for idx, row in enumerate(rows):
        branch = row.conj() @ m
        p = float(np.vdot(branch, branch).real)
        total += p
        post = None
        if rest and p > 1e-24:
            post = StateVector(branch / np.sqrt(p))
        records.append(MeasurementRecord(idx, p, post))
    if not complete:
        records.append(MeasurementRecord(len(rows), max(0.0, 1.0 - total), None))
    return records


def computational_basis(k: int) -> list[StateVector]:
    return [StateVector.basis(format(i, f"0{k}b")) for i in range(1 << k)]


def fidelity(a, b) -> float:
    """|<a|b>|^2, insensitive to global phase."""
    a, b = as_state(a), as_state(b)
    if a.dim != b.dim:
        raise ArgumentError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return float(min(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2, 1.0))


def schmidt_coefficients(s, split: int) -> np.ndarray:
    """Singular values across the cut after the first ``split`` qubits."""
    s = as_state(s)
    m = s.amplitudes.reshape(1 << split, -1)
    return np.linalg.svd(m, compute_uv=False)


def max_local_unitary_fidelity(a, b, split: int) -> float:
    """max over local unitaries U (x) V of |<a|U (x) V|b>|^2.

    Equals (sum_k s_k(a) s_k(b))^2 for the sorted Schmidt coefficients.
    """
    sa = schmidt_coefficients(a, split)
    sb = schmidt_coefficients(b, split)
    return float(min(np.dot(sa, sb) ** 2, 1.0))


def gram_matrix(states) -> np.ndarray:
    rows = np.array([as_state(x).amplitudes for x in states])
    return rows.conj() @ rows.T


def max_offdiagonal(gram: np.ndarray) -> float:
    g = np.asarray(gram)
    return float(np.abs(g - np.diag(np.diag(g))).max())
