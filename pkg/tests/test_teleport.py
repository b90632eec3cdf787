import numpy as np
import pytest

from magnonqi.errors import ArgumentError, ChannelError
from magnonqi.magnon import TELEPORT, MagnonAmplitudes, build_4_2_prime, sample_amplitudes
from magnonqi.qcore import StateVector, gram_matrix, is_unitary, max_offdiagonal, pauli_string
from magnonqi.teleport import (
    PAULI_PAIRS,
    IndexConvention,
    TwoQubitSecret,
    alice_basis,
    bob_correction,
    branch_operators,
    discover_corrections,
    partner_row,
    table_correction_pair,
    proportionality_residual,
    run_teleport,
    run_teleport_partition,
)

from conftest import BALANCED


def test_pauli_table_covers_all_pairs():
    assert sorted(PAULI_PAIRS) == [(a, b) for a in range(4) for b in range(4)]


def test_partner_row_wraps_one_based():
    assert [partner_row(i) for i in (1, 8, 9, 16)] == [9, 16, 1, 8]
    with pytest.raises(ArgumentError):
        partner_row(0)


def test_table_corrections():
    assert np.array_equal(bob_correction(1), np.eye(4))
    assert table_correction_pair(8) == (0, 2)
    for i in range(1, 17):
        assert is_unitary(bob_correction(i), atol=1e-12)


def test_search_convention_has_no_fixed_table():
    with pytest.raises(ArgumentError):
        bob_correction(1, IndexConvention.SEARCH)


def test_first_element_is_prime_channel():
    assert np.array_equal(alice_basis(BALANCED)[0].amplitudes, build_4_2_prime(BALANCED).amplitudes)


def test_sign_flip_element_is_orthogonal():
    basis = alice_basis(BALANCED)
    assert abs(np.vdot(basis[0].amplitudes, basis[3].amplitudes)) < 1e-12


def test_balanced_basis_is_orthonormal():
    assert max_offdiagonal(gram_matrix(alice_basis(BALANCED))) < 1e-10


def test_uniform_channel_rejected():
    with pytest.raises(ChannelError) as exc:
        run_teleport(StateVector.basis("00"), MagnonAmplitudes.uniform())
    assert "tele_bilinear" in exc.value.report.failing()


def test_secret_00_balanced_channel():
    rep = run_teleport(StateVector.basis("00"), BALANCED)
    assert rep.passed
    assert [b.fidelity for b in rep.branches] == pytest.approx([1] * 16)


def test_random_secrets_and_probabilities(rng):
    w = sample_amplitudes(TELEPORT, 5)
    for _ in range(20):
        rep = run_teleport(TwoQubitSecret.random(rng), w)
        assert rep.passed
        assert all(abs(b.probability - 1 / 16) < 1e-9 for b in rep.branches)


def test_table_correction_only_fits_four_rows():
    w = sample_amplitudes(TELEPORT, 0)
    rep = run_teleport(StateVector.basis("01"), w)
    assert rep.correction_source == "search"
    ops = branch_operators(w, alice_basis(w))
    ok = [
        i for i, op in enumerate(ops, 1)
        if proportionality_residual(pauli_string(*table_correction_pair(i)) @ op, np.eye(4)) < 1e-9
    ]
    assert ok == [1, 4, 13, 16]


def test_discovered_correction_is_m_then_n():
    # the map each outcome leaves on Bob's side is M_i (x) N_i up to phase
    for (pair, resid), (m, n) in zip(discover_corrections(BALANCED), PAULI_PAIRS):
        assert resid < 1e-12
        assert pair == (m, n)


def test_branch_operators_are_scaled_unitaries():
    ops = branch_operators(BALANCED, alice_basis(BALANCED))
    for op in ops:
        assert is_unitary(op * 4, atol=1e-10)


def test_full_family_point_has_broken_basis():
    w = sample_amplitudes(TELEPORT, 1, full_family=True)
    rep = run_teleport(StateVector.basis("00"), w)
    assert rep.constraint.passed
    assert not rep.passed
    assert "not orthonormal" in rep.failure
    assert rep.gram_deviation == pytest.approx(0.389, abs=1e-3)


def test_unphased_corrections_need_real_products():
    # relative phase between W101 and W110 falls outside the Pauli group
    w = MagnonAmplitudes(w001=0.5, w010=0.5, w100=0, w110=0.5, w101=0.5j, w011=0)
    rep = run_teleport(StateVector(np.array([1, 1, 1j, 0]) / np.sqrt(3)), w)
    assert not rep.protocol.passed
    assert not rep.passed


@pytest.mark.parametrize("alice", [(0, 1), (0, 2), (2, 3)])
def test_redistributed_partitions(alice, rng):
    secret = TwoQubitSecret.random(rng)
    rep = run_teleport_partition(secret, BALANCED, alice)
    assert rep.passed, rep.failure


def test_partition_needs_two_distinct_qubits():
    with pytest.raises(ArgumentError):
        run_teleport_partition(StateVector.basis("00"), BALANCED, (1, 1))


def test_corrected_state_matches_secret(rng):
    secret = TwoQubitSecret.random(rng).state()
    rep = run_teleport(secret, BALANCED)
    for b in rep.branches:
        assert b.correction == PAULI_PAIRS[b.index - 1]
        assert b.fidelity == pytest.approx(1, abs=1e-9)
