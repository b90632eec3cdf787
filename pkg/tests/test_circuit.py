import numpy as np
import pytest

from magnonqi.circuit import Gate, circuit_to_json, run_circuit
from magnonqi.errors import ArgumentError
from magnonqi.qcore import StateVector


def test_bell_circuit():
    out = run_circuit(StateVector.basis("00"), [Gate("H", (0,)), Gate("X", (1,), (0,))])
    assert np.allclose(out.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_toffoli_needs_both_controls():
    g = [Gate("X", (2,), (0, 1))]
    assert run_circuit(StateVector.basis("110"), g).amplitude("111") == 1
    assert run_circuit(StateVector.basis("100"), g).amplitude("100") == 1


def test_fan_out_targets_share_controls():
    out = run_circuit(StateVector.basis("100"), [Gate("X", (1, 2), (0,))])
    assert out.amplitude("111") == 1


def test_gate_validation():
    with pytest.raises(ArgumentError):
        Gate("T", (0,))
    with pytest.raises(ArgumentError):
        Gate("X", (0,), (0,))
    with pytest.raises(IndexError):
        run_circuit(StateVector.basis("0"), [Gate("X", (1,))])


def test_json_round_trip():
    gates = [Gate("H", (3,), (4,)), Gate("X", (0, 3), (4,))]
    assert [Gate.from_json(d) for d in circuit_to_json(gates)] == gates
