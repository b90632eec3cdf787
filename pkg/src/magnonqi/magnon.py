"""Two-magnon four-qubit channel states and their amplitude constraints.

The general channel is

    W001|0011> + W010|0101> + W100|0110> + W110|1100> + W101|1010> + W011|1001>

(qubits 1..4 left to right).  Each protocol family comes with two residual
sets: the defining relations as stated (``check_constraints``) and the
conditions the simulated protocol actually needs (``protocol_residuals``).
The defining teleportation and dense-coding relations are necessary but not
sufficient for the protocols; the default samplers therefore draw from the
part of each solution set on which the protocol works, and
``full_family=True`` draws from the full solution set.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import ArgumentError, InfeasibleError, NormalizationError
from .qcore import ATOL, StateVector, entanglement_entropy

KEYS = ("w001", "w010", "w100", "w110", "w101", "w011")

# ket (qubits 1234) carrying each coefficient
BASIS_4_2 = {
    "w001": "0011",
    "w010": "0101",
    "w100": "0110",
    "w110": "1100",
    "w101": "1010",
    "w011": "1001",
}
# the primed state swaps where W001 and W110 attach
BASIS_4_2_PRIME = {**BASIS_4_2, "w110": "0011", "w001": "1100"}

RESCALE_TOL = 1e-6
DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class MagnonAmplitudes:
    """The six W coefficients of the two-magnon channel.

    Inputs whose squared norm is within 1e-6 of one are rescaled and
    ``rescaled`` is set; anything further off raises NormalizationError.
    """

    w001: complex
    w010: complex
    w100: complex
    w110: complex
    w101: complex
    w011: complex
    rescaled: bool = field(default=False, compare=False)

    def __post_init__(self):
        vals = [complex(getattr(self, k)) for k in KEYS]
        norm2 = sum(abs(v) ** 2 for v in vals)
        if abs(norm2 - 1.0) > RESCALE_TOL:
            raise NormalizationError(f"sum |w|^2 = {norm2!r}, expected 1")
        if abs(norm2 - 1.0) > ATOL:
            scale = 1.0 / math.sqrt(norm2)
            vals = [v * scale for v in vals]
            object.__setattr__(self, "rescaled", True)
        for k, v in zip(KEYS, vals):
            object.__setattr__(self, k, v)

    @classmethod
    def from_mapping(cls, m: Mapping[str, complex]) -> "MagnonAmplitudes":
        missing = [k for k in KEYS if k not in m]
        if missing:
            raise ArgumentError(f"missing amplitudes: {', '.join(missing)}")
        extra = sorted(set(m) - set(KEYS))
        if extra:
            raise ArgumentError(f"unknown amplitude keys: {', '.join(extra)}")
        return cls(**{k: complex(m[k]) for k in KEYS})

    @classmethod
    def from_array(cls, values) -> "MagnonAmplitudes":
        values = np.asarray(values, dtype=complex).reshape(-1)
        if values.size != 6:
            raise ArgumentError("expected six amplitudes")
        return cls(*values)

    @classmethod
    def uniform(cls) -> "MagnonAmplitudes":
        return cls(*([1 / math.sqrt(6)] * 6))

    @classmethod
    def from_json(cls, obj: Mapping) -> "MagnonAmplitudes":
        """Parse ``{"w001": [re, im], ...}``; bare numbers are taken as real."""
        parsed = {}
        for k, v in obj.items():
            if isinstance(v, (int, float)) and not isinstance(v, bool):
                parsed[k] = complex(v)
            elif (
                isinstance(v, (list, tuple))
                and len(v) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
            ):
                parsed[k] = complex(v[0], v[1])
            else:
                raise ArgumentError(f"field {k!r}: expected [re, im], got {v!r}")
        return cls.from_mapping(parsed)

    def to_json(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in KEYS}

    def as_dict(self) -> dict[str, complex]:
        return {k: getattr(self, k) for k in KEYS}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, k) for k in KEYS], dtype=complex)

    def with_global_phase(self, theta: float) -> "MagnonAmplitudes":
        return MagnonAmplitudes.from_array(self.as_array() * np.exp(1j * theta))


# w101 = w001 = w110 = w010 = 1/2: satisfies every family's requirements
BALANCED_CHANNEL = MagnonAmplitudes(w001=0.5, w010=0.5, w100=0, w110=0.5, w101=0.5, w011=0)


def as_amplitudes(w) -> MagnonAmplitudes:
    if isinstance(w, MagnonAmplitudes):
        return w
    if isinstance(w, Mapping):
        return MagnonAmplitudes.from_mapping(w)
    return MagnonAmplitudes.from_array(w)


def _build(w, mapping) -> StateVector:
    w = as_amplitudes(w)
    v = np.zeros(16, dtype=complex)
    for k, ket in mapping.items():
        v[int(ket, 2)] = getattr(w, k)
    return StateVector(v)


def build_4_2(w) -> StateVector:
    """The channel state |4;2> on qubits 1234."""
    return _build(w, BASIS_4_2)


def build_4_2_prime(w) -> StateVector:
    """|4;2>': as |4;2> but W110 sits on |0011> and W001 on |1100>."""
    return _build(w, BASIS_4_2_PRIME)


def build_w_prime(alpha: complex, beta: complex, gamma: complex) -> StateVector:
    """alpha|100> + beta|010> + gamma|001>."""
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2 + abs(gamma) ** 2
    if abs(norm2 - 1.0) > ATOL:
        raise NormalizationError(f"|alpha|^2+|beta|^2+|gamma|^2 = {norm2!r}")
    v = np.zeros(8, dtype=complex)
    v[0b100], v[0b010], v[0b001] = alpha, beta, gamma
    return StateVector(v)


class Family(enum.Enum):
    TELEPORT = "teleport"
    DENSE = "dense"
    QIS = "qis"


class Eq13Interpretation(enum.Enum):
    """Two readings of the chained bilinear relation of the QIS family.

    BOTH_ZERO: W110 W001* = 0 and W100 W011* + W010 W101* = 0.
    EQUAL_ONLY: W110 W001* = W100 W011* + W010 W101*.
    """

    BOTH_ZERO = "both-zero"
    EQUAL_ONLY = "equal-only"


@dataclass(frozen=True)
class ConstraintFamily:
    tag: Family
    eq13: Optional[Eq13Interpretation] = None

    def __post_init__(self):
        if self.tag is Family.QIS and self.eq13 is None:
            raise ArgumentError("the QIS family needs an Eq13Interpretation")
        if self.tag is not Family.QIS and self.eq13 is not None:
            raise ArgumentError("only the QIS family takes an Eq13Interpretation")

    @property
    def name(self) -> str:
        return self.tag.value if self.eq13 is None else f"{self.tag.value}[{self.eq13.value}]"


TELEPORT = ConstraintFamily(Family.TELEPORT)
DENSE_CODING = ConstraintFamily(Family.DENSE)


def qis_family(interpretation: Eq13Interpretation) -> ConstraintFamily:
    return ConstraintFamily(Family.QIS, interpretation)


@dataclass(frozen=True)
class ConstraintReport:
    family: str
    residuals: dict[str, float]
    tolerance: float
    passed: bool

    def failing(self) -> list[str]:
        return [k for k, r in self.residuals.items() if not r < self.tolerance]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "residuals": dict(self.residuals),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "failing": self.failing(),
        }


def _report(name: str, residuals: dict[str, float], tolerance: float) -> ConstraintReport:
    residuals = {k: float(v) for k, v in residuals.items()}
    return ConstraintReport(name, residuals, tolerance, all(r < tolerance for r in residuals.values()))


def _abs2(z: complex) -> float:
    return abs(z) ** 2


def check_constraints(w, family: ConstraintFamily, tolerance: float = DEFAULT_TOLERANCE) -> ConstraintReport:
    """Residuals of the defining amplitude relations for ``family``."""
    w = as_amplitudes(w)
    a = w.as_dict()
    n = {k: _abs2(v) for k, v in a.items()}
    if family.tag is Family.TELEPORT:
        res = {
            "tele_bilinear": abs(a["w011"] * a["w110"].conjugate() + a["w001"] * a["w100"].conjugate()),
            "tele_w101_w001": abs(n["w101"] - n["w001"]),
            "tele_w110_w100_w001": abs(n["w110"] + n["w100"] - n["w001"]),
            "tele_w011_w010_w001": abs(n["w011"] + n["w010"] - n["w001"]),
        }
    elif family.tag is Family.DENSE:
        res = {
            "dense_w010_w101": abs(n["w010"] - n["w101"]),
            "dense_w001_w101": abs(n["w001"] - n["w101"]),
            "dense_w110_w011_w101": abs(n["w110"] + n["w011"] - n["w101"]),
            "dense_w100_zero": abs(a["w100"]),
        }
    else:
        res = {
            "qis_w110_split": abs(n["w110"] - n["w100"] - n["w010"]),
            "qis_w001_split": abs(n["w001"] - n["w101"] - n["w011"]),
        }
        head = a["w110"] * a["w001"].conjugate()
        cross = a["w100"] * a["w011"].conjugate() + a["w010"] * a["w101"].conjugate()
        if family.eq13 is Eq13Interpretation.BOTH_ZERO:
            res["qis_head_zero"] = abs(head)
            res["qis_cross_zero"] = abs(cross)
        else:
            res["qis_head_eq_cross"] = abs(head - cross)
    return _report(family.name, res, tolerance)


def protocol_residuals(w, family: ConstraintFamily, tolerance: float = DEFAULT_TOLERANCE) -> ConstraintReport:
    """Necessary and sufficient conditions for the simulated protocol.

    teleport: Alice's 16 basis states (Pauli pairs on the first two qubits of
      |4;2>') are orthonormal iff those qubits are maximally mixed; Bob's
      branch maps are unitary iff |4;2> is maximally entangled across
      (1,3)|(2,4); Bob's corrections are Pauli pairs iff W101 W110* and
      W001 W010* are real.
    dense: the 16 encodings are orthonormal iff qubits (1,3) are maximally
      mixed.
    qis: Charlie's two measurement vectors per Bob outcome are orthogonal
      and recover the secret iff the two norm relations hold; the bilinear
      relation plays no role.
    """
    w = as_amplitudes(w)
    a = w.as_dict()
    n = {k: _abs2(v) for k, v in a.items()}
    q = 0.25
    if family.tag is Family.TELEPORT:
        res = {
            "basis_w110": abs(n["w110"] - q),
            "basis_w001": abs(n["w001"] - q),
            "basis_w010_w100": abs(n["w010"] + n["w100"] - q),
            "basis_w101_w011": abs(n["w101"] + n["w011"] - q),
            "basis_coherence": abs(a["w010"] * a["w011"].conjugate() + a["w100"] * a["w101"].conjugate()),
        }
        res.update(_maximal_13_24(a, n, prefix="channel"))
        res["pauli_phase_w101_w110"] = abs((a["w101"] * a["w110"].conjugate()).imag)
        res["pauli_phase_w001_w010"] = abs((a["w001"] * a["w010"].conjugate()).imag)
    elif family.tag is Family.DENSE:
        res = _maximal_13_24(a, n, prefix="encoding")
    else:
        res = {
            "qis_w110_split": abs(n["w110"] - n["w100"] - n["w010"]),
            "qis_w001_split": abs(n["w001"] - n["w101"] - n["w011"]),
        }
    return _report(f"{family.name}/protocol", res, tolerance)


def _maximal_13_24(a, n, prefix):
    q = 0.25
    return {
        f"{prefix}_w010": abs(n["w010"] - q),
        f"{prefix}_w101": abs(n["w101"] - q),
        f"{prefix}_w001_w100": abs(n["w001"] + n["w100"] - q),
        f"{prefix}_w110_w011": abs(n["w110"] + n["w011"] - q),
        f"{prefix}_coherence": abs(a["w001"] * a["w011"].conjugate() + a["w100"] * a["w110"].conjugate()),
    }


def product_qubits(w, atol: float = 1e-9) -> list[int]:
    """Channel qubits (0-based) left in a pure, unentangled state."""
    s = build_4_2(w)
    return [qb for qb in range(4) if entanglement_entropy(s, [qb]) < atol]


def _phase(rng) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def sample_amplitudes(family: ConstraintFamily, seed: int, *, full_family: bool = False) -> MagnonAmplitudes:
    """Draw a deterministic random member of ``family``.

    Every draw passes ``check_constraints(w, family)``.  By default draws
    also pass ``protocol_residuals``; with ``full_family=True`` they
    cover the whole solution set of the defining relations instead.
    """
    rng = np.random.default_rng(seed)
    h = 0.5
    if family.tag is Family.TELEPORT:
        if not full_family:
            # moduli fixed at 1/2, W100 = W011 = 0; two free phases, two signs
            pa, pb = _phase(rng), _phase(rng)
            s1, s2 = rng.choice([1.0, -1.0], size=2)
            return MagnonAmplitudes(
                w001=s2 * h * pb, w010=h * pb, w100=0, w110=h * pa, w101=s1 * h * pa, w011=0
            )
        # |W001| = |W101| = 1/2, |W100| = x <= 1/(2 sqrt 2); the bilinear fixes W011
        x = math.sqrt(rng.random() / 8)
        w001, w101 = h * _phase(rng), h * _phase(rng)
        w100 = x * _phase(rng)
        w110 = math.sqrt(0.25 - x * x) * _phase(rng)
        w011 = -w001 * w100.conjugate() / w110.conjugate()
        w010 = math.sqrt(max(0.25 - abs(w011) ** 2, 0.0)) * _phase(rng)
        return MagnonAmplitudes(w001=w001, w010=w010, w100=w100, w110=w110, w101=w101, w011=w011)
    if family.tag is Family.DENSE:
        t = 0.0 if not full_family else rng.random() * math.pi / 2
        return MagnonAmplitudes(
            w001=h * _phase(rng),
            w010=h * _phase(rng),
            w100=0,
            w110=h * math.cos(t) * _phase(rng),
            w101=h * _phase(rng),
            w011=h * math.sin(t) * _phase(rng),
        )
    if family.eq13 is Eq13Interpretation.BOTH_ZERO:
        # W110 W001* = 0 with both norm relations kills one whole Bob branch
        r = math.sqrt(0.5)
        u = rng.random() * math.pi / 2
        p = [_phase(rng) for _ in range(3)]
        big, c1, c2 = r * p[0], r * math.cos(u) * p[1], r * math.sin(u) * p[2]
        if rng.random() < 0.5:
            return MagnonAmplitudes(w001=big, w010=0, w100=0, w110=0, w101=c1, w011=c2)
        return MagnonAmplitudes(w001=0, w010=c1, w100=c2, w110=big, w101=0, w011=0)
    if family.eq13 is Eq13Interpretation.EQUAL_ONLY:
        # |W110| = a, |W001| = b with 2a^2 + 2b^2 = 1; Cauchy-Schwarz forces the
        # two norm splits to share one angle and the phases to align
        a2 = 0.05 + 0.4 * rng.random()
        a, b = math.sqrt(a2), math.sqrt(0.5 - a2)
        th = 0.1 + (math.pi / 2 - 0.2) * rng.random()
        p110, p001, p1, p2 = (_phase(rng) for _ in range(4))
        d = (p110 * p001.conjugate()).conjugate()
        return MagnonAmplitudes(
            w001=b * p001,
            w010=a * math.sin(th) * p2,
            w100=a * math.cos(th) * p1,
            w110=a * p110,
            w101=b * math.sin(th) * p2 * d,
            w011=b * math.cos(th) * p1 * d,
        )
    raise InfeasibleError(f"no sampler for family {family.name}")
