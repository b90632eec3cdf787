import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnonqi.errors import ArgumentError
from magnonqi.hamiltonian import (
    HeisenbergParams,
    build_h,
    energy,
    evolution_operator,
    evolve,
    sector_weights,
    t_star,
    total_s2,
    total_sz,
    w_generation_check,
)
from magnonqi.qcore import StateVector

from conftest import random_state

# regression constants from the t_star evolution of |100> at Delta = 1
ALPHA = 0.75 + 1j * math.sqrt(7) / 12
BETA = GAMMA = -1j * math.sqrt(7) / 6

params = st.builds(
    HeisenbergParams,
    st.floats(0.1, 5) | st.floats(-5, -0.1),
    st.floats(-3, 3),
    st.floats(-20, 20),
)


def test_hamiltonian_is_hermitian():
    h = build_h(HeisenbergParams(1.3, 0.4))
    assert np.abs(h - h.conj().T).max() < 1e-12


def test_aligned_energy():
    for j, d in [(1.0, 1.0), (2.0, 0.3), (-0.7, 2.5)]:
        h = build_h(HeisenbergParams(j, d))
        assert h[0, 0].real == pytest.approx(j * (2 + d) / 4, abs=1e-12)


def test_isotropic_spectrum():
    vals = np.linalg.eigvalsh(build_h(HeisenbergParams(1.0, 1.0)))
    assert np.allclose(sorted(vals), [-0.75] * 4 + [0.75] * 4)


def test_symmetries():
    h = build_h(HeisenbergParams(0.8, 0.3))
    assert np.abs(h @ total_sz() - total_sz() @ h).max() < 1e-12
    h1 = build_h(HeisenbergParams(0.8, 1.0))
    assert np.abs(h1 @ total_s2() - total_s2() @ h1).max() < 1e-12


def test_zero_time_is_identity():
    assert np.allclose(evolution_operator(HeisenbergParams(1.0, 0.5, 0.0)), np.eye(8))


def test_evolve_errors():
    with pytest.raises(ArgumentError):
        evolve(StateVector.basis("10"), HeisenbergParams(1.0))
    with pytest.raises(ArgumentError):
        evolve(StateVector.basis("100"), HeisenbergParams(0.0, 1.0, 1.0))
    with pytest.raises(ArgumentError):
        t_star(0)


def test_w_generation_coefficients():
    r = w_generation_check(1.0)
    assert r.one_magnon_weight == pytest.approx(1, abs=1e-10)
    assert abs(r.alpha - ALPHA) < 1e-12
    assert abs(r.beta - BETA) < 1e-12
    assert abs(r.gamma - GAMMA) < 1e-12
    assert abs(r.alpha) ** 2 == pytest.approx(11 / 18)
    assert r.teleport_condition_residual == pytest.approx(11 / 18)
    assert r.initial_state == "100"


@pytest.mark.parametrize("j", [0.5, 2.0, 7.0])
def test_w_generation_scales_with_j(j):
    r = w_generation_check(j)
    assert abs(r.alpha - ALPHA) < 1e-10 and abs(r.beta - BETA) < 1e-10


@pytest.mark.parametrize("t", np.linspace(0, 10, 7))
def test_one_magnon_sector_is_kept(t):
    s = evolve(StateVector.basis("100"), HeisenbergParams(1.0, 0.6, t))
    rest = [i for i in range(8) if bin(i).count("1") != 1]
    assert np.abs(s.amplitudes[rest]).max() < 1e-10


@settings(max_examples=60, deadline=None)
@given(params)
def test_evolution_is_unitary(p):
    u = evolution_operator(p)
    assert np.abs(u.conj().T @ u - np.eye(8)).max() < 1e-10


@settings(max_examples=60, deadline=None)
@given(params, st.integers(0, 2**32 - 1))
def test_energy_and_sectors_conserved(p, seed):
    s0 = random_state(np.random.default_rng(seed), 3)
    s1 = evolve(s0, p)
    h = build_h(p)
    assert abs(energy(s1, h) - energy(s0, h)) < 1e-9
    assert np.abs(sector_weights(s1) - sector_weights(s0)).max() < 1e-10
