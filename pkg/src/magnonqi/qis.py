"""Quantum information splitting of A|00> + B|11> through |4;2>.

Joint register ``s1 s2 1 2 3 4``: secret on qubits 0-1, channel on 2-5.
Alice measures ``(s1, s2, 1)`` in a GHZ-type basis, Bob measures channel
qubit 2 in the computational basis, and Charlie holds channel qubits 3 and
4.  Charlie then runs the ancilla-assisted disentangling circuit on
``(a1, C1, C2, a2)`` and measures the two ancillas.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .circuit import Gate, run_circuit
from .errors import ChannelError, UnresolvedConstraintError
from .magnon import (
    ConstraintReport,
    Eq13Interpretation,
    MagnonAmplitudes,
    as_amplitudes,
    build_4_2,
    check_constraints,
    product_qubits,
    qis_family,
    sample_amplitudes,
)
from .qcore import (
    StateVector,
    computational_basis,
    fidelity,
    max_local_unitary_fidelity,
    pauli_string,
    project_measure,
    tensor,
)
from .teleport import find_pauli_correction

FIDELITY_TOL = 1e-9
_R2 = np.sqrt(0.5)


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


GHZ_LABELS = ("(|001>+|110>)/sqrt2", "(|001>-|110>)/sqrt2", "(|111>+|000>)/sqrt2", "(|111>-|000>)/sqrt2")
GHZ_BASIS = (
    StateVector((_ket("001") + _ket("110")) * _R2),
    StateVector((_ket("001") - _ket("110")) * _R2),
    StateVector((_ket("111") + _ket("000")) * _R2),
    StateVector((_ket("111") - _ket("000")) * _R2),
)

# (a1, C1, C2, a2)
FIG2_CIRCUIT = (
    Gate("X", (0,), (2,)),
    Gate("X", (3,), (1,)),
    Gate("X", (1,), (0,)),
    Gate("X", (2,), (3,)),
)

FINAL_LABELS = ("A|00>+B|11>", "A|00>-B|11>", "B|00>+A|11>", "B|00>-A|11>")
# final-state column of Charlie's table, keyed by (Bob, Charlie outcome)
LISTED_FINAL = {(1, 0): 0, (1, 1): 1, (0, 0): 2, (0, 1): 3}
# Pauli pair taking each final-state label back to A|00>+B|11>, up to phase
FINAL_CORRECTION = ((0, 0), (3, 0), (1, 1), (2, 1))


@dataclass(frozen=True)
class EntangledSecret:
    A: complex
    B: complex

    def __post_init__(self):
        if abs(abs(self.A) ** 2 + abs(self.B) ** 2 - 1) > 1e-10:
            raise ValueError("|A|^2 + |B|^2 must be 1")

    def state(self) -> StateVector:
        return StateVector([self.A, 0, 0, self.B])

    @classmethod
    def random(cls, rng: np.random.Generator) -> "EntangledSecret":
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]))

    def to_json(self) -> list:
        return [[complex(self.A).real, complex(self.A).imag], [complex(self.B).real, complex(self.B).imag]]


def _final_candidates(A, B) -> list[np.ndarray]:
    return [
        np.array([A, 0, 0, B]),
        np.array([A, 0, 0, -B]),
        np.array([B, 0, 0, A]),
        np.array([B, 0, 0, -A]),
    ]


def listed_charlie_states(w, A: complex, B: complex) -> dict:
    """Charlie's (unnormalized) state per (Alice outcome, Bob bit), as listed in the outcome table."""
    w = as_amplitudes(w)
    e = {b: _ket(b) for b in ("00", "01", "10", "11")}
    bob1 = lambda x, y, s: x * w.w110 * e["00"] + s * y * (w.w100 * e["10"] + w.w010 * e["01"])  # noqa: E731
    return {
        (0, 1): bob1(A, B, 1),
        (0, 0): A * (w.w101 * e["10"] + w.w011 * e["01"]) + B * w.w001 * e["11"],
        (1, 1): bob1(A, B, -1),
        (1, 0): A * (w.w101 * e["10"] - w.w011 * e["01"]) + B * w.w001 * e["11"],
        (2, 1): bob1(B, A, 1),
        (2, 0): B * (w.w101 * e["10"] + w.w011 * e["01"]) + A * w.w001 * e["11"],
        (3, 1): bob1(B, A, -1),
        (3, 0): B * (w.w101 * e["10"] + w.w011 * e["01"]) - A * w.w001 * e["11"],
    }


def derived_charlie_states(w, A: complex, B: complex) -> dict:
    """As ``listed_charlie_states`` with the sign of the (Alice 1, Bob 0) entry placed on B."""
    forms = listed_charlie_states(w, A, B)
    w = as_amplitudes(w)
    forms[(1, 0)] = A * (w.w101 * _ket("10") + w.w011 * _ket("01")) - B * w.w001 * _ket("11")
    return forms


def charlie_vectors(w, bob_outcome: int) -> tuple[np.ndarray, np.ndarray]:
    """The two ancilla measurement vectors for this Bob outcome (unnormalized)."""
    w = as_amplitudes(w)
    if bob_outcome == 1:
        shared = w.w100 * _ket("01") + w.w010 * _ket("10")
        head = w.w110 * _ket("00")
        return head + shared, head - shared
    shared = w.w101 * _ket("10") + w.w011 * _ket("01")
    head = w.w001 * _ket("00")
    return shared + head, shared - head


def charlie_basis(w, bob_outcome: int) -> list[StateVector]:
    """Charlie's two normalized measurement vectors plus two completing vectors."""
    v1, v2 = charlie_vectors(w, bob_outcome)
    vecs = [v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)]
    # orthonormal complement from the SVD null space
    _, _, vh = np.linalg.svd(np.array(vecs).conj())
    vecs += [vh[2].conj(), vh[3].conj()]
    return [StateVector(v) for v in vecs]


def correction_rule(alice_outcome: int, charlie_outcome: int) -> tuple[int, int]:
    """Pauli pair mapping Charlie's disentangled state back to A|00> + B|11>.

    Alice outcomes 2, 3 swap A and B (fixed by sigma_1 (x) sigma_1); the
    relative sign flips when exactly one of Alice's sign bit and Charlie's
    outcome is set (fixed by sigma_3 (x) sigma_0).  Both together give
    sigma_2 (x) sigma_1 up to phase.
    """
    swap = alice_outcome >= 2
    flip = (alice_outcome % 2) ^ charlie_outcome
    if swap and flip:
        return (2, 1)
    if swap:
        return (1, 1)
    if flip:
        return (3, 0)
    return (0, 0)


@dataclass(frozen=True)
class CharlieOutcome:
    record: object
    raw_final: Optional[StateVector]
    correction: tuple[int, int]
    final: Optional[StateVector]


def charlie_disentangle(charlie_state, bob_outcome: int, w, alice_outcome: Optional[int] = None) -> list[CharlieOutcome]:
    """Attach ancillas, run the disentangling circuit, measure the ancillas.

    Ancillas start in |1>|1> when Bob saw 0 and in |0>|0> when he saw 1.
    The correction comes from ``correction_rule`` when Alice's outcome is
    given; otherwise the listed final-state column is followed literally.
    Records 0 and 1 are the two listed measurement vectors; 2 and 3 complete
    the basis and carry zero probability under the QIS relations.
    """
    charlie_state = charlie_state if isinstance(charlie_state, StateVector) else StateVector(charlie_state)
    anc = StateVector.basis("1" if bob_outcome == 0 else "0")
    reg = run_circuit(tensor(tensor(anc, charlie_state), anc), FIG2_CIRCUIT)
    records = project_measure(reg, charlie_basis(w, bob_outcome), (0, 3))
    out = []
    for rec in records:
        k = rec.outcome_index
        if k < 2 and alice_outcome is not None:
            pair = correction_rule(alice_outcome, k)
        elif k < 2:
            pair = FINAL_CORRECTION[LISTED_FINAL[(bob_outcome, k)]]
        else:
            pair = (0, 0)
        final = None
        if rec.post_state is not None:
            final = StateVector(pauli_string(*pair) @ rec.post_state.amplitudes)
        out.append(CharlieOutcome(rec, rec.post_state, pair, final))
    return out


@dataclass(frozen=True)
class QisBranch:
    alice: int
    bob: int
    charlie: int
    probability: float
    prestate: str
    final_label: Optional[str]
    listed_label: str
    correction: tuple[int, int]
    search_correction: tuple[int, int]
    fidelity: float
    local_recovery: float

    def to_json(self) -> dict:
        return {
            "alice": self.alice,
            "alice_state": GHZ_LABELS[self.alice],
            "bob": self.bob,
            "charlie": self.charlie,
            "probability": self.probability,
            "prestate_match": self.prestate,
            "final_before_correction": self.final_label,
            "listed_final": self.listed_label,
            "correction": list(self.correction),
            "search_correction": list(self.search_correction),
            "fidelity": self.fidelity,
            "charlie_local_recovery_bound": self.local_recovery,
        }


@dataclass
class QisReport:
    constraint: ConstraintReport
    interpretation: Eq13Interpretation
    branches: list[QisBranch] = field(default_factory=list)
    total_probability: float = 0.0
    unused_probability: float = 0.0
    tolerance: float = FIDELITY_TOL

    @property
    def min_fidelity(self) -> float:
        return min((b.fidelity for b in self.branches), default=0.0)

    @property
    def prestate_discrepancies(self) -> list[tuple[int, int]]:
        return sorted({(b.alice, b.bob) for b in self.branches if b.prestate != "listed"})

    @property
    def passed(self) -> bool:
        return (
            bool(self.branches)
            and abs(self.total_probability - 1.0) <= self.tolerance
            and all(abs(b.fidelity - 1.0) <= self.tolerance for b in self.branches)
        )

    def to_json(self) -> dict:
        return {
            "constraint": self.constraint.to_json(),
            "eq13_interpretation": self.interpretation.value,
            "total_probability": self.total_probability,
            "unused_probability": self.unused_probability,
            "prestate_discrepancies": [list(x) for x in self.prestate_discrepancies],
            "min_fidelity": self.min_fidelity,
            "branches": [b.to_json() for b in self.branches],
            "pass": self.passed,
        }


def _match(state: StateVector, forms: list[np.ndarray], tol: float = FIDELITY_TOL) -> Optional[int]:
    for idx, f in enumerate(forms):
        n = np.linalg.norm(f)
        if n > 1e-14 and fidelity(state, StateVector(f / n)) > 1 - tol:
            return idx
    return None


def _branch_states(secret: StateVector, w):
    """(alice, bob) -> (probability, Charlie's pre-state), skipping empty branches.

    The four GHZ-type vectors span only part of Alice's space; the weight
    outside it is returned under the key ``None``.
    """
    joint = tensor(secret, build_4_2(w))
    out = {}
    for ra in project_measure(joint, GHZ_BASIS, (0, 1, 2), complete=False):
        if ra.outcome_index == len(GHZ_BASIS):
            out[None] = ra.probability
            continue
        if ra.post_state is None:
            continue
        for rb in project_measure(ra.post_state, computational_basis(1), (0,)):
            if rb.post_state is None or ra.probability * rb.probability < 1e-20:
                continue
            out[(ra.outcome_index, rb.outcome_index)] = (ra.probability * rb.probability, rb.post_state)
    return out


def _branch_maps(w) -> dict:
    """(alice, bob, charlie) -> 4x2 map from (A, B) to Charlie's uncorrected final state."""
    cols: dict = {}
    for col, secret in enumerate((StateVector.basis("00"), StateVector.basis("11"))):
        for key, val in _branch_states(secret, w).items():
            if key is None:
                continue
            (a, b), (p, pre) = key, val
            for co in charlie_disentangle(pre, b, w, a)[:2]:
                v = np.zeros(4, complex)
                if co.raw_final is not None:
                    v = co.raw_final.amplitudes * np.sqrt(p * co.record.probability)
                cols.setdefault((a, b, co.record.outcome_index), [np.zeros(4, complex)] * 2)
                cols[(a, b, co.record.outcome_index)] = [
                    v if i == col else c for i, c in enumerate(cols[(a, b, co.record.outcome_index)])
                ]
    return {k: np.array(v).T for k, v in cols.items()}


_EMBED = np.zeros((4, 2))
_EMBED[0, 0] = _EMBED[3, 1] = 1


def run_qis(secret, w, interpretation: Optional[Eq13Interpretation] = None, tolerance: float = FIDELITY_TOL) -> QisReport:
    """Run every (Alice, Bob, Charlie) branch and score Charlie's final state."""
    if interpretation is None:
        interpretation = default_interpretation()
    w = as_amplitudes(w)
    if not isinstance(secret, EntangledSecret):
        secret = EntangledSecret(*secret)
    report = check_constraints(w, qis_family(interpretation))
    if not report.passed:
        raise ChannelError("channel fails the QIS relations: " + ", ".join(report.failing()), report)
    psi = secret.state()
    out = QisReport(report, interpretation, tolerance=tolerance)
    listed = listed_charlie_states(w, secret.A, secret.B)
    corrected = derived_charlie_states(w, secret.A, secret.B)
    maps = _branch_maps(w)
    finals = _final_candidates(secret.A, secret.B)
    states = _branch_states(psi, w)
    total = unused = states.pop(None)
    for (a, b), (p, pre) in sorted(states.items()):
        if _match(pre, [listed[(a, b)]]) is not None:
            t2 = "listed"
        elif _match(pre, [corrected[(a, b)]]) is not None:
            t2 = "corrected"
        else:
            t2 = "mismatch"
        local = max_local_unitary_fidelity(pre, psi, 1)
        for co in charlie_disentangle(pre, b, w, a):
            q = p * co.record.probability
            c = co.record.outcome_index
            if c >= 2:
                unused += q
                total += q
                continue
            total += q
            if co.final is None:
                continue
            label = _match(co.raw_final, finals)
            search, _ = find_pauli_correction(maps[(a, b, c)], _EMBED)
            out.branches.append(
                QisBranch(
                    a,
                    b,
                    c,
                    q,
                    t2,
                    None if label is None else FINAL_LABELS[label],
                    FINAL_LABELS[LISTED_FINAL[(b, c)]],
                    co.correction,
                    search,
                    fidelity(co.final, psi),
                    local,
                )
            )
    out.total_probability = total
    out.unused_probability = unused
    return out


@dataclass
class Eq13Resolution:
    interpretation: Eq13Interpretation
    evidence: dict

    def to_json(self) -> dict:
        return {"interpretation": self.interpretation.value, "evidence": self.evidence}


def _evaluate(interp: Eq13Interpretation, seeds, rng) -> dict:
    fam = qis_family(interp)
    samples = degenerate = 0
    min_fid = 1.0
    all_pass = True
    example_products = None
    for seed in seeds:
        w = sample_amplitudes(fam, int(seed))
        samples += 1
        prods = product_qubits(w)
        if prods:
            degenerate += 1
            example_products = example_products or [q + 1 for q in prods]
        rep = run_qis(EntangledSecret.random(rng), w, interp)
        min_fid = min(min_fid, rep.min_fidelity)
        all_pass = all_pass and rep.passed
    return {
        "feasible": samples > 0,
        "samples": samples,
        "degenerate_samples": degenerate,
        "non_degenerate_family": degenerate < samples,
        "unentangled_channel_qubits_example": example_products,
        "min_fidelity": min_fid,
        "all_branches_recover": all_pass,
    }


def resolve_eq13(seed_count: int = 8, base_seed: int = 0) -> Eq13Resolution:
    """Decide which reading of the chained bilinear relation the protocol supports.

    A reading qualifies when its sampled channels are genuinely four-party
    entangled (no channel qubit left in a product state) and every sampled
    run recovers the secret.  If both qualify the weaker EQUAL_ONLY is kept.
    """
    ss = np.random.SeedSequence(base_seed)
    seeds = ss.generate_state(seed_count)
    evidence = {}
    for k, interp in enumerate(Eq13Interpretation):
        rng = np.random.default_rng([base_seed, k])
        evidence[interp.value] = _evaluate(interp, seeds, rng)
    evidence["bilinear_needed"] = _bilinear_needed(seeds, np.random.default_rng([base_seed, 99]))
    ok = [
        i for i in Eq13Interpretation
        if evidence[i.value]["non_degenerate_family"] and evidence[i.value]["all_branches_recover"]
    ]
    if not ok:
        raise UnresolvedConstraintError("no reading of the QIS bilinear relation supports the protocol", evidence)
    choice = Eq13Interpretation.EQUAL_ONLY if Eq13Interpretation.EQUAL_ONLY in ok else ok[0]
    return Eq13Resolution(choice, evidence)


def _bilinear_needed(seeds, rng) -> dict:
    """Break the bilinear relation while keeping both norm relations, then rerun."""
    min_fid = 1.0
    broken = 0.0
    for seed in seeds:
        w = sample_amplitudes(qis_family(Eq13Interpretation.EQUAL_ONLY), int(seed))
        tilt = np.exp(0.7j)
        v = w.as_dict()
        v["w101"] *= tilt
        v["w011"] *= tilt
        w2 = MagnonAmplitudes.from_mapping(v)
        broken = max(broken, check_constraints(w2, qis_family(Eq13Interpretation.EQUAL_ONLY)).residuals["qis_head_eq_cross"])
        rep = _run_unchecked(EntangledSecret.random(rng), w2)
        min_fid = min(min_fid, rep)
    return {"max_bilinear_residual": broken, "min_fidelity_without_bilinear": min_fid}


def _run_unchecked(secret: EntangledSecret, w) -> float:
    psi = secret.state()
    worst = 1.0
    states = _branch_states(psi, w)
    states.pop(None)
    for (a, b), (_, pre) in states.items():
        for co in charlie_disentangle(pre, b, w, a)[:2]:
            if co.final is not None and co.record.probability > 1e-14:
                worst = min(worst, fidelity(co.final, psi))
    return worst


DEFAULT_SEED_COUNT = 8


@functools.lru_cache(maxsize=None)
def default_resolution() -> Eq13Resolution:
    return resolve_eq13(DEFAULT_SEED_COUNT)


def default_interpretation() -> Eq13Interpretation:
    return default_resolution().interpretation
