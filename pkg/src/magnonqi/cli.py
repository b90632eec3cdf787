"""Command-line front end: ``magnonqi <subcommand> ...``.

Exit codes: 0 when the run passes, 1 when a protocol or constraint check
fails, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import dense, hamiltonian, magnon, qis, teleport
from .errors import ArgumentError, ChannelError, CircuitDiscrepancy, MagnonError, NormalizationError
from .magnon import DENSE_CODING, TELEPORT, Eq13Interpretation, MagnonAmplitudes
from .qcore import StateVector

SCHEMA_VERSION = 1
FIDELITY_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-10

PRESETS = {
    "uniform": MagnonAmplitudes.uniform,
    "product": lambda: MagnonAmplitudes(w001=1, w010=0, w100=0, w110=0, w101=0, w011=0),
    "balanced": lambda: magnon.BALANCED_CHANNEL,
}


class InputError(Exception):
    """Bad user input; reported on stderr with exit code 2."""


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def _family(name: str, eq13: Optional[Eq13Interpretation]) -> magnon.ConstraintFamily:
    if name == "teleport":
        return TELEPORT
    if name == "dense":
        return DENSE_CODING
    return magnon.qis_family(eq13 or qis.default_interpretation())


def _parse_amplitudes(text: str, origin: str) -> MagnonAmplitudes:
    if text.strip() in PRESETS:
        return PRESETS[text.strip()]()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{origin}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise InputError(f"{origin}: expected a JSON object keyed w001..w011")
    try:
        return MagnonAmplitudes.from_json(obj)
    except (ArgumentError, NormalizationError) as exc:
        raise InputError(f"{origin}: {exc}") from None


def _amplitudes(args, default_family: str) -> tuple[MagnonAmplitudes, dict]:
    if args.amplitudes is not None:
        return _parse_amplitudes(args.amplitudes, "--amplitudes"), {"source": "inline"}
    if args.amplitudes_file is not None:
        try:
            text = Path(args.amplitudes_file).read_text()
        except OSError as exc:
            raise InputError(f"--amplitudes-file: {exc}") from None
        return _parse_amplitudes(text, args.amplitudes_file), {"source": "file", "path": args.amplitudes_file}
    if args.sample:
        name = args.family or default_family
        fam = _family(name, args.eq13)
        w = magnon.sample_amplitudes(fam, args.seed, full_family=args.full_family)
        return w, {"source": "sample", "family": fam.name, "seed": args.seed, "full_family": args.full_family}
    raise InputError("an amplitude source is required: --amplitudes, --amplitudes-file or --sample")


def _add_common(p: argparse.ArgumentParser, tolerance: float) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=tolerance)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--reproducible", action="store_true", help="omit the timestamp")
    p.add_argument("--eq13", type=Eq13Interpretation, choices=list(Eq13Interpretation), metavar="{both-zero,equal-only}",
                   help="override the resolved reading of the QIS bilinear relation")


def _add_source(p: argparse.ArgumentParser, family_required: bool = False) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--amplitudes", help="inline JSON or a preset: " + ", ".join(PRESETS))
    g.add_argument("--amplitudes-file")
    g.add_argument("--sample", action="store_true", help="draw a channel from --family with --seed")
    p.add_argument("--family", choices=("teleport", "dense", "qis"), required=family_required)
    p.add_argument("--full-family", action="store_true",
                   help="sample the whole solution set of the defining relations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magnonqi", description="Simulate protocols over the four-qubit two-magnon channel.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", help="evaluate a constraint family's residuals")
    _add_source(p, family_required=True)
    _add_common(p, ORTHOGONALITY_TOL)

    p = sub.add_parser("sample", help="draw amplitudes from a constraint family")
    p.add_argument("--family", choices=("teleport", "dense", "qis"), required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--full-family", action="store_true")
    _add_common(p, ORTHOGONALITY_TOL)

    p = sub.add_parser("teleport", help="teleport random two-qubit secrets")
    _add_source(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--alice-channel", help="two 1-based channel qubits held by Alice, e.g. 1,2")
    _add_common(p, FIDELITY_TOL)

    p = sub.add_parser("dense", help="superdense coding distinguishability and capacity")
    _add_source(p)
    p.add_argument("--fig1", action="store_true", help="run the transcribed generation circuit instead")
    _add_common(p, ORTHOGONALITY_TOL)

    p = sub.add_parser("qis", help="split random entangled secrets")
    _add_source(p)
    p.add_argument("--trials", type=int, default=100)
    _add_common(p, FIDELITY_TOL)

    p = sub.add_parser("evolve", help="three-spin Heisenberg evolution")
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    t = p.add_mutually_exclusive_group()
    t.add_argument("--t", type=float, default=None)
    t.add_argument("--t-star", action="store_true", help="use t = (2/3J) arccos(1/8)")
    p.add_argument("--initial", default=hamiltonian.INITIAL_STATE, help="bitstring on A B C")
    _add_common(p, ORTHOGONALITY_TOL)

    p = sub.add_parser("resolve-eq13", help="decide the reading of the QIS bilinear relation")
    p.add_argument("--seeds", type=int, default=qis.DEFAULT_SEED_COUNT)
    _add_common(p, FIDELITY_TOL)
    return parser


def _check_trials(n: int) -> None:
    if n < 1:
        raise InputError(f"--trials must be positive, got {n}")


def _cmd_check(args) -> dict:
    w, src = _amplitudes(args, args.family)
    fam = _family(args.family, args.eq13)
    report = magnon.check_constraints(w, fam, args.tolerance)
    extra = {}
    if fam.tag is not magnon.Family.QIS:
        extra["protocol_residuals"] = magnon.protocol_residuals(w, fam, args.tolerance).to_json()
    return {
        "config": {**src, "family": fam.name},
        "amplitudes": w.to_json(),
        "rescaled": w.rescaled,
        "residuals": report.residuals,
        "failing": report.failing(),
        **extra,
        "pass": report.passed,
    }


def _cmd_sample(args) -> dict:
    if args.count < 1:
        raise InputError(f"--count must be positive, got {args.count}")
    fam = _family(args.family, args.eq13)
    draws = []
    for k in range(args.count):
        w = magnon.sample_amplitudes(fam, args.seed + k, full_family=args.full_family)
        rep = magnon.check_constraints(w, fam, args.tolerance)
        draws.append({"seed": args.seed + k, "amplitudes": w.to_json(), "pass": rep.passed})
    return {
        "config": {"family": fam.name, "seed": args.seed, "count": args.count, "full_family": args.full_family},
        "samples": draws,
        "residuals": {},
        "pass": all(d["pass"] for d in draws),
    }


def _alice_channel(text: str) -> tuple[int, int]:
    try:
        qs = tuple(int(x) - 1 for x in text.split(","))
    except ValueError:
        raise InputError(f"--alice-channel: expected two comma-separated qubits, got {text!r}") from None
    if len(qs) != 2 or len(set(qs)) != 2 or not set(qs) <= {0, 1, 2, 3}:
        raise InputError(f"--alice-channel: expected two distinct qubits from 1..4, got {text!r}")
    return qs


def _cmd_teleport(args) -> dict:
    _check_trials(args.trials)
    w, src = _amplitudes(args, "teleport")
    rng = np.random.default_rng(args.seed)
    partition = _alice_channel(args.alice_channel) if args.alice_channel else None
    trials = []
    first = None
    try:
        for k in range(args.trials):
            secret = teleport.TwoQubitSecret.random(rng)
            if partition is None:
                rep = teleport.run_teleport(secret, w, tolerance=args.tolerance)
            else:
                rep = teleport.run_teleport_partition(secret, w, partition, tolerance=args.tolerance)
            first = first or rep
            trials.append({"trial": k, "min_fidelity": rep.min_fidelity, "pass": rep.passed})
    except ChannelError as exc:
        return _channel_failure(exc, src)
    probs = [b.probability for b in first.branches]
    return {
        "config": {**src, "trials": args.trials, "alice_channel": None if partition is None else [q + 1 for q in partition]},
        "residuals": first.constraint.residuals,
        "protocol_residuals": first.protocol.residuals,
        "gram_deviation": first.gram_deviation,
        "correction_source": first.correction_source,
        "failure": first.failure,
        "branches": [b.to_json() for b in first.branches],
        "max_probability_deviation": max((abs(p - 1 / 16) for p in probs), default=None),
        "min_fidelity": min(t["min_fidelity"] for t in trials),
        "trials": trials,
        "pass": all(t["pass"] for t in trials),
    }


def _channel_failure(exc: ChannelError, src: dict) -> dict:
    rep = exc.report
    return {
        "config": src,
        "error": str(exc),
        "residuals": rep.residuals if rep else {},
        "failing": rep.failing() if rep else [],
        "branches": [],
        "pass": False,
    }


def _cmd_dense(args) -> dict:
    if args.fig1:
        try:
            dense.fig1_generate()
            d = dense.fig1_diagnostics()
            error = None
        except CircuitDiscrepancy as exc:
            d, error = exc.diagnostics, str(exc)
        return {
            "config": {"source": "fig1"},
            "circuit_discrepancy": error,
            "diagnostics": d.to_json(),
            "residuals": d.constraint.residuals,
            "pass": error is None,
        }
    w, src = _amplitudes(args, "dense")
    rep = dense.run_dense(w, args.tolerance)
    return {
        "config": src,
        "amplitudes": w.to_json(),
        "residuals": rep.constraint.residuals,
        "failing": rep.constraint.failing(),
        "protocol_residuals": rep.protocol.residuals,
        "distinguishability": rep.distinguishability,
        "holevo_capacity": rep.capacity,
        "branches": [],
        "pass": rep.passed,
    }


def _cmd_qis(args) -> dict:
    _check_trials(args.trials)
    interp = args.eq13 or qis.default_interpretation()
    args.eq13 = interp
    w, src = _amplitudes(args, "qis")
    rng = np.random.default_rng(args.seed)
    trials = []
    first = None
    try:
        for k in range(args.trials):
            rep = qis.run_qis(qis.EntangledSecret.random(rng), w, interp, args.tolerance)
            first = first or rep
            trials.append({"trial": k, "min_fidelity": rep.min_fidelity, "total_probability": rep.total_probability, "pass": rep.passed})
    except ChannelError as exc:
        return _channel_failure(exc, src)
    return {
        "config": {**src, "trials": args.trials},
        "residuals": first.constraint.residuals,
        "prestate_discrepancies": [list(x) for x in first.prestate_discrepancies],
        "branches": [b.to_json() for b in first.branches],
        "min_fidelity": min(t["min_fidelity"] for t in trials),
        "trials": trials,
        "pass": all(t["pass"] for t in trials),
    }


def _cmd_evolve(args) -> dict:
    bits = args.initial
    if len(bits) != 3 or set(bits) - {"0", "1"}:
        raise InputError(f"--initial: expected a 3-bit string, got {bits!r}")
    if args.j == 0:
        raise InputError("--j must be nonzero")
    t = hamiltonian.t_star(args.j) if args.t_star or args.t is None else args.t
    p = hamiltonian.HeisenbergParams(args.j, args.delta, t)
    s0 = StateVector.basis(bits)
    s1 = hamiltonian.evolve(s0, p)
    h = hamiltonian.build_h(p)
    u = hamiltonian.evolution_operator(p)
    unitarity = float(np.abs(u.conj().T @ u - np.eye(8)).max())
    sector = float(np.abs(hamiltonian.sector_weights(s1) - hamiltonian.sector_weights(s0)).max())
    drift = abs(hamiltonian.energy(s1, h) - hamiltonian.energy(s0, h))
    residuals = {"unitarity": unitarity, "sector_drift": sector, "energy_drift": drift}
    out = {
        "config": {"J": args.j, "delta": args.delta, "t": t, "t_star": args.t_star or args.t is None, "initial": bits},
        "final_state": s1.amplitudes,
        "sector_weights": hamiltonian.sector_weights(s1),
        "residuals": residuals,
        "pass": unitarity < ORTHOGONALITY_TOL and sector < ORTHOGONALITY_TOL and drift < FIDELITY_TOL,
    }
    if bits == hamiltonian.INITIAL_STATE and args.delta == 1.0 and (args.t_star or args.t is None):
        out["w_generation"] = hamiltonian.w_generation_check(args.j).to_json()
    return out


def _cmd_resolve(args) -> dict:
    if args.seeds < 1:
        raise InputError(f"--seeds must be positive, got {args.seeds}")
    res = qis.resolve_eq13(args.seeds, args.seed)
    args.eq13 = res.interpretation
    return {"config": {"seeds": args.seeds, "base_seed": args.seed}, **res.to_json(), "residuals": {}, "pass": True}


COMMANDS = {
    "check": _cmd_check,
    "sample": _cmd_sample,
    "teleport": _cmd_teleport,
    "dense": _cmd_dense,
    "qis": _cmd_qis,
    "evolve": _cmd_evolve,
    "resolve-eq13": _cmd_resolve,
}


def _text(report: dict) -> str:
    lines = [f"{report['subcommand']}: {'PASS' if report['pass'] else 'FAIL'}"]
    for k in ("error", "circuit_discrepancy", "failure", "interpretation", "min_fidelity", "distinguishability", "holevo_capacity"):
        if report.get(k) is not None:
            lines.append(f"  {k}: {report[k]}")
    if report.get("failing"):
        lines.append("  failing: " + ", ".join(report["failing"]))
    for k, v in report.get("residuals", {}).items():
        lines.append(f"  residual {k}: {v:.3e}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        body = COMMANDS[args.subcommand](args)
    except InputError as exc:
        print(f"magnonqi {args.subcommand}: {exc}", file=sys.stderr)
        return 2
    except MagnonError as exc:
        print(f"magnonqi {args.subcommand}: {exc}", file=sys.stderr)
        return 2
    interp = args.eq13 or qis.default_interpretation()
    report = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": args.subcommand,
        "eq13_interpretation": interp.value,
        "tolerance": args.tolerance,
        **body,
    }
    report.setdefault("branches", [])
    if not args.reproducible:
        report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    report = _jsonable(report)
    text = json.dumps(report, indent=2) + "\n" if args.format == "json" else _text(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
