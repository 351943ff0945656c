import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rydlz import model, qmath
from rydlz.errors import DomainError

finite = st.floats(-50, 50, allow_nan=False)
positive = st.floats(0.05, 10, allow_nan=False)
S2 = np.sqrt(2)


def test_single_atom_hamiltonian():
    assert np.allclose(model.single_atom_hamiltonian(0, 1), [[0, 0.5], [0.5, 0]])
    assert np.allclose(model.single_atom_hamiltonian(2, 1), [[0, 0.5], [0.5, -2]])


def test_pair_hamiltonian_diagonal():
    h = model.pair_hamiltonian(1.3, 1.0, 0.7)
    assert np.allclose(np.diag(h), [0, -1.3, -1.3, -2.6 + 0.7])
    assert qmath.is_hermitian(h)


def test_pair_spectrum_without_interaction():
    w = np.linalg.eigvalsh(model.pair_hamiltonian(0, 1, 0))
    assert np.allclose(w, [-1, 0, 0, 1], atol=1e-12)


def test_symmetric_projection_example():
    h = model.pair_hamiltonian_symmetric(0, 1, 0.5)
    c = 1 / S2
    assert np.allclose(h, [[0, c, 0], [c, 0, c], [0, c, 0.5]])


@settings(max_examples=50, deadline=None)
@given(finite, positive, st.floats(0, 5))
def test_symmetric_block_is_the_projection(delta, omega, v0):
    h4 = model.pair_hamiltonian(delta, omega, v0)
    e = model.SYMMETRIC_EMBEDDING
    assert np.allclose(e.conj().T @ h4 @ e, model.pair_hamiltonian_symmetric(delta, omega, v0))
    # the antisymmetric state is decoupled and has energy -delta
    a = np.array([0, 1, -1, 0]) / S2
    assert np.allclose(h4 @ a, -delta * a, atol=1e-12)
    assert np.allclose(e.conj().T @ h4 @ a, 0, atol=1e-12)
    w4 = np.linalg.eigvalsh(h4)
    w3 = np.linalg.eigvalsh(model.pair_hamiltonian_symmetric(delta, omega, v0))
    assert np.allclose(np.sort(np.append(w3, -delta)), w4, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(finite, positive, st.floats(0, 5))
def test_pair_hamiltonian_exchange_symmetric(delta, omega, v0):
    h = model.pair_hamiltonian(delta, omega, v0)
    assert np.allclose(model.SWAP @ h, h @ model.SWAP)


@settings(max_examples=50, deadline=None)
@given(finite, positive)
def test_zero_interaction_spectrum_is_minkowski_sum(delta, omega):
    w1 = np.linalg.eigvalsh(model.single_atom_hamiltonian(delta, omega))
    sums = np.sort([a + b for a in w1 for b in w1])
    assert np.allclose(np.linalg.eigvalsh(model.pair_hamiltonian(delta, omega, 0)), sums, atol=1e-10)


def test_adiabatic_states_at_resonance():
    ad = model.adiabatic_states(0.0, 1.0)
    assert np.allclose(ad.phi_plus, np.array([1, 1]) / S2)
    assert np.allclose(ad.phi_minus, np.array([-1, 1]) / S2)
    assert ad.e_plus == pytest.approx(0.5) and ad.e_minus == pytest.approx(-0.5)


def test_adiabatic_states_far_from_resonance():
    assert np.allclose(np.abs(model.adiabatic_states(100, 1).phi_plus), [1, 0], atol=1e-2)
    assert np.allclose(np.abs(model.adiabatic_states(-100, 1).phi_plus), [0, 1], atol=1e-2)


@settings(max_examples=80, deadline=None)
@given(st.floats(-200, 200, allow_nan=False), positive)
def test_adiabatic_identities(delta, omega):
    ad = model.adiabatic_states(delta, omega)
    assert ad.beta_plus * ad.beta_minus == pytest.approx(1.0, rel=1e-10)
    assert ad.beta_plus - ad.beta_minus == pytest.approx(2 * delta / omega, rel=1e-9, abs=1e-9)
    gap = ad.e_plus - ad.e_minus
    assert gap == pytest.approx(np.hypot(delta, omega), rel=1e-10)
    assert gap >= omega * (1 - 1e-12)
    h = model.single_atom_hamiltonian(delta, omega)
    scale = max(1.0, abs(delta))
    for e, phi in ((ad.e_plus, ad.phi_plus), (ad.e_minus, ad.phi_minus)):
        assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(h @ phi, e * phi, atol=1e-10 * scale)


def test_minimum_gap_at_resonance():
    deltas = np.linspace(-3, 3, 61)
    gaps = [model.adiabatic_states(d, 1.0).omega_bar for d in deltas]
    assert deltas[int(np.argmin(gaps))] == 0.0
    assert min(gaps) == pytest.approx(1.0)


def test_adiabatic_states_need_a_gap():
    with pytest.raises(DomainError):
        model.adiabatic_states(1.0, 0.0)


def test_crossing_detunings():
    assert model.crossing_detunings(0.5) == (0, 0.25, 0.5)
    assert model.crossing_detunings(0) == (0, 0, 0)
    assert model.crossing_detunings(2) == (0, 1, 2)
    # the diabatic energies 0, -delta, -2 delta + v0 are pairwise degenerate there
    v0 = 0.5
    d_ggs, d_ggrr, d_srr = model.crossing_detunings(v0)
    assert -d_ggs == 0
    assert -2 * d_ggrr + v0 == 0
    assert -d_srr == -2 * d_srr + v0


def test_schedule():
    s = model.SweepSchedule(v=2.0)
    assert (s.t_start, s.t_end) == (-50, 50)
    assert s.delta(10) == 20
    assert s.delta(80) == 100
    assert s.with_(v0=1).v0 == 1 and s.v0 == 0
    for bad in (dict(v=0), dict(v=1, delta_start=5, delta_end=1), dict(v=1, v0=-1)):
        with pytest.raises(DomainError):
            model.SweepSchedule(**bad)
    with pytest.raises(DomainError):
        model.DissipationSpec(-0.1)


def test_embedding_and_states():
    psi = model.symmetric_state(0.6, 0.0, 0.8, 0, np.pi)
    assert np.allclose(model.embed_symmetric(psi), [0.6, 0, 0, -0.8])
    assert np.allclose(model.embed_symmetric([0, 1, 0]), [0, 1 / S2, 1 / S2, 0])
    assert np.allclose(model.basis_state("rg"), [0, 0, 1, 0])
    assert np.allclose(model.basis_state("r"), [0, 1])
