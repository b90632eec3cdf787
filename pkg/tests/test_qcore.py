import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnonqi.errors import ArgumentError, BasisError, MatrixError, NormalizationError, UnitarityError
from magnonqi.magnon import build_4_2
from magnonqi.qcore import (
    SIGMA,
    DensityMatrix,
    StateVector,
    apply_gate,
    computational_basis,
    controlled,
    entanglement_entropy,
    fidelity,
    max_local_unitary_fidelity,
    partial_trace,
    project_measure,
    reduced_density,
    tensor,
    von_neumann_entropy,
)

from conftest import BALANCED, random_state, states

BELL = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2))
CNOT = controlled(SIGMA[1])


def test_tensor_basis_states():
    s = tensor(StateVector.basis("0"), StateVector.basis("1"))
    assert np.allclose(s.amplitudes, [0, 1, 0, 0])


def test_tensor_plus_zero():
    plus = StateVector(np.array([1, 1]) / np.sqrt(2))
    s = tensor(plus, StateVector.basis("0"))
    assert np.allclose(s.amplitudes, np.array([1, 0, 1, 0]) / np.sqrt(2))


def test_tensor_with_channel_traces_back(rng):
    psi = random_state(rng, 2)
    joint = tensor(psi, build_4_2(BALANCED))
    assert joint.num_qubits == 6
    rho = partial_trace(joint.density(), [0, 1]).entries
    assert np.abs(rho - psi.density().entries).max() < 1e-12


def test_state_rejects_bad_norm_and_dimension():
    with pytest.raises(NormalizationError):
        StateVector([1, 1])
    with pytest.raises(ArgumentError):
        StateVector([1, 0, 0])


def test_amplitudes_are_read_only():
    s = StateVector.basis("01")
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1


def test_sigma_x_on_leftmost_qubit():
    s = apply_gate(StateVector.basis("00"), SIGMA[1], [0])
    assert s.amplitude("10") == 1


def test_cnot_makes_bell_state():
    plus0 = StateVector(np.array([1, 0, 1, 0]) / np.sqrt(2))
    assert np.allclose(apply_gate(plus0, CNOT, [0, 1]).amplitudes, BELL.amplitudes)


def test_sigma_y_convention():
    s = apply_gate(StateVector.basis("0"), SIGMA[2], [0])
    assert np.isclose(s.amplitude("1"), 1j)


def test_target_order_matters():
    s = apply_gate(StateVector.basis("01"), CNOT, [1, 0])
    assert s.amplitude("11") == 1


def test_apply_gate_errors():
    s = StateVector.basis("00")
    with pytest.raises(UnitarityError):
        apply_gate(s, np.array([[1, 1], [0, 1]]), [0])
    with pytest.raises(ArgumentError):
        apply_gate(s, CNOT, [0])
    with pytest.raises(IndexError):
        apply_gate(s, SIGMA[1], [2])
    with pytest.raises(IndexError):
        apply_gate(s, CNOT, [1, 1])


def test_partial_trace_of_bell_state():
    rho = partial_trace(BELL.density(), [0]).entries
    assert np.allclose(rho, np.eye(2) / 2)


def test_partial_trace_keep_all_is_identity(rng):
    rho = random_state(rng, 3).density()
    assert np.array_equal(partial_trace(rho, [0, 1, 2]).entries, rho.entries)


def test_partial_trace_errors():
    with pytest.raises(ArgumentError):
        partial_trace(BELL.density(), [])
    with pytest.raises(IndexError):
        partial_trace(BELL.density(), [3])


def test_channel_cut_carries_two_ebits():
    s = build_4_2(BALANCED)
    # keep channel qubits 1 and 3, i.e. trace out 2 and 4
    assert abs(von_neumann_entropy(reduced_density(s, [0, 2])) - 2) < 1e-9


def test_entropy_values():
    assert abs(von_neumann_entropy(StateVector.basis("0").density())) < 1e-12
    assert abs(von_neumann_entropy(np.eye(2) / 2) - 1) < 1e-12
    assert abs(von_neumann_entropy(np.eye(4) / 4) - 2) < 1e-12


def test_entropy_rejects_non_hermitian():
    with pytest.raises(MatrixError):
        von_neumann_entropy(np.array([[0.5, 0.5], [0, 0.5]]))


def test_density_validate_flags_trace():
    with pytest.raises(MatrixError):
        DensityMatrix(np.eye(2)).validate()


def test_measure_single_qubit():
    recs = project_measure(StateVector.basis("01"), computational_basis(1), [0])
    assert recs[0].probability == pytest.approx(1)
    assert recs[1].probability == pytest.approx(0)
    assert recs[0].post_state.amplitude("1") == pytest.approx(1)
    assert recs[1].post_state is None


def test_measure_in_bell_basis():
    r2 = 1 / np.sqrt(2)
    bell_basis = [
        StateVector([r2, 0, 0, r2]),
        StateVector([r2, 0, 0, -r2]),
        StateVector([0, r2, r2, 0]),
        StateVector([0, r2, -r2, 0]),
    ]
    probs = [r.probability for r in project_measure(BELL, bell_basis, [0, 1])]
    assert probs == pytest.approx([1, 0, 0, 0])


def test_measure_rejects_bad_bases():
    s = StateVector.basis("00")
    with pytest.raises(BasisError):
        project_measure(s, [StateVector.basis("0"), StateVector([np.sqrt(0.5), np.sqrt(0.5)])], [0])
    with pytest.raises(BasisError):
        project_measure(s, [StateVector.basis("0")], [0])


def test_incomplete_basis_gets_residual_record():
    s = StateVector(np.array([1, 1]) / np.sqrt(2))
    recs = project_measure(s, [StateVector.basis("0")], [0], complete=False)
    assert len(recs) == 2
    assert recs[1].probability == pytest.approx(0.5)
    assert recs[1].post_state is None


def test_fidelity_basics(rng):
    s = random_state(rng, 2)
    assert fidelity(s, s) == pytest.approx(1)
    assert fidelity(StateVector.basis("0"), StateVector.basis("1")) == 0
    assert fidelity(s, StateVector(np.exp(0.3j) * s.amplitudes)) == pytest.approx(1)
    with pytest.raises(ArgumentError):
        fidelity(StateVector.basis("0"), s)


def test_max_local_unitary_fidelity_bell_vs_product():
    assert max_local_unitary_fidelity(BELL, StateVector.basis("00"), 1) == pytest.approx(0.5)
    singlet = StateVector(np.array([0, 1, -1, 0]) / np.sqrt(2))
    assert max_local_unitary_fidelity(BELL, singlet, 1) == pytest.approx(1)
    assert fidelity(BELL, singlet) == 0


@settings(max_examples=50, deadline=None)
@given(states(3), st.integers(0, 2**32 - 1))
def test_unitaries_preserve_norm(s, seed):
    g = np.random.default_rng(seed)
    q, _ = np.linalg.qr(g.normal(size=(4, 4)) + 1j * g.normal(size=(4, 4)))
    out = apply_gate(s, q, [2, 0])
    assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-10


@settings(max_examples=50, deadline=None)
@given(states(4), st.sets(st.integers(0, 3), min_size=1, max_size=3))
def test_reduced_density_is_a_state(s, keep):
    rho = reduced_density(s, keep)
    rho.validate()
    full = partial_trace(s.density(), keep)
    assert np.abs(rho.entries - full.entries).max() < 1e-12


@settings(max_examples=50, deadline=None)
@given(states(4), st.sets(st.integers(0, 3), min_size=1, max_size=3))
def test_pure_state_entropy_is_symmetric(s, keep):
    rest = set(range(4)) - keep
    assert abs(entanglement_entropy(s, keep) - entanglement_entropy(s, rest)) < 1e-9
    assert -1e-12 <= entanglement_entropy(s, keep) <= min(len(keep), len(rest)) + 1e-9


@settings(max_examples=50, deadline=None)
@given(states(3))
def test_measurement_probabilities_sum_to_one(s):
    recs = project_measure(s, computational_basis(2), [2, 0])
    assert abs(sum(r.probability for r in recs) - 1) < 1e-10
