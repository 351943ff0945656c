"""Entanglement measures and two-qubit local-unitary invariants."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model, qmath
from .errors import DomainError

SQRT2 = np.sqrt(2.0)

INVARIANT_NAMES = (
    "ip_t1_0", "ip_t1_1", "ip_t1_2",
    "ip_t2_0", "ip_t2_1", "ip_t2_2",
    "ip_cross_0", "ip_cross_1", "ip_cross_2",
    "tr_1", "tr_2", "tr_3",
    "det_t12",
)


@dataclass(frozen=True)
class EntropyBreakdown:
    a_coeff: float
    b_coeff: float
    x: float
    lambda1: float
    lambda2: float
    entropy: float


def entanglement_entropy_symmetric(a_gg, a_s, a_rr, theta1, theta2) -> EntropyBreakdown:
    """Closed-form single-atom entropy of ``a_gg|gg> + a_s e^{i t1}|s> + a_rr e^{i t2}|rr>``.

    Only the combination ``2 theta1 - theta2`` enters.
    """
    a_gg, a_s, a_rr = float(a_gg), float(a_s), float(a_rr)
    if min(a_gg, a_s, a_rr) < 0:
        raise DomainError("amplitudes must be non-negative")
    if abs(a_gg ** 2 + a_s ** 2 + a_rr ** 2 - 1.0) > 1e-6:
        raise DomainError("amplitudes are not normalised")
    g2, s2, r2 = a_gg ** 2, a_s ** 2, a_rr ** 2
    big_a = (g2 - r2) ** 2 + 2.0 * s2 * (g2 + r2)
    big_b = 4.0 * a_gg * s2 * a_rr
    x = float(np.sqrt(max(big_a + big_b * np.cos(2.0 * theta1 - theta2), 0.0)))
    x = min(x, 1.0)
    lam1, lam2 = (1.0 - x) / 2.0, (1.0 + x) / 2.0
    return EntropyBreakdown(big_a, big_b, x, lam1, lam2,
                            qmath.entropy_from_eigenvalues([lam1, lam2]))


def as_density_matrix(state) -> np.ndarray:
    """Full 4x4 pair density matrix from a (gg, s, rr) ket, a 4-dim ket or a 4x4 matrix."""
    state = np.asarray(state, dtype=complex)
    if state.shape == (3,):
        state = model.embed_symmetric(state)
    if state.ndim == 1:
        return qmath.ket_to_dm(state / np.linalg.norm(state))
    return state


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho)
    return np.real([np.trace(rho @ p) for p in qmath.PAULIS])


def reduced_bloch_vectors(states, mode: str = "pair_symmetric", atom: str = "first") -> np.ndarray:
    """Bloch vectors of one atom for a batch of pair kets or density matrices (``(n, 3)``)."""
    states = np.asarray(states)
    if states.ndim == 2:
        if mode == "pair_symmetric":
            states = model.embed_symmetric(states)
        psi = states.reshape(-1, 2, 2)
        if atom == "first":
            red = np.einsum("tij,tkj->tik", psi, psi.conj())
        else:
            red = np.einsum("tji,tjk->tik", psi, psi.conj())
    else:
        r = states.reshape(-1, 2, 2, 2, 2)
        red = np.einsum("tajbj->tab", r) if atom == "first" else np.einsum("tjajb->tab", r)
    return np.stack([2 * red[:, 0, 1].real, -2 * red[:, 0, 1].imag,
                     (red[:, 0, 0] - red[:, 1, 1]).real], axis=1)


def entanglement_entropy_series(states, mode: str = "pair_symmetric") -> np.ndarray:
    """Entropy of atom 1 for each pure pair state in a batch."""
    r = np.linalg.norm(reduced_bloch_vectors(states, mode), axis=1)
    return qmath.qubit_entropy_from_bloch(r)


def entanglement_entropy(state) -> float:
    """Entropy of atom 1 via partial trace for any pair state representation."""
    return qmath.von_neumann_entropy(qmath.partial_trace(as_density_matrix(state), "first"))


@dataclass(frozen=True)
class PauliDecomposition:
    t1: np.ndarray
    t2: np.ndarray
    t12: np.ndarray

    def reconstruct(self) -> np.ndarray:
        rho = np.eye(4, dtype=complex) / 4.0
        for a, s in enumerate(qmath.PAULIS):
            rho += self.t1[a] * qmath.kron(s, qmath.IDENTITY2)
            rho += self.t2[a] * qmath.kron(qmath.IDENTITY2, s)
            for b, s2 in enumerate(qmath.PAULIS):
                rho += self.t12[a, b] * qmath.kron(s, s2)
        return rho


def pauli_decomposition(rho) -> PauliDecomposition:
    """Local vectors and correlation matrix, all normalised with a factor 1/4."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("pauli_decomposition needs a 4x4 density matrix")
    ops = (qmath.IDENTITY2,) + qmath.PAULIS
    # coefficient[a, b] = Tr(rho sigma_a (x) sigma_b) / 4 with sigma_0 = I
    coeff = np.real([[np.trace(rho @ qmath.kron(a, b)) for b in ops] for a in ops]) / 4.0
    return PauliDecomposition(t1=coeff[1:, 0], t2=coeff[0, 1:], t12=coeff[1:, 1:])


@dataclass(frozen=True)
class InvariantSet:
    ip_t1: np.ndarray
    ip_t2: np.ndarray
    ip_cross: np.ndarray
    traces: np.ndarray
    det_t12: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.ip_t1, self.ip_t2, self.ip_cross, self.traces, [self.det_t12]])

    def as_dict(self) -> dict[str, float]:
        return dict(zip(INVARIANT_NAMES, map(float, self.as_array())))


def lu_invariants(rho) -> InvariantSet:
    """The 13 polynomial invariants that decide two-qubit local-unitary equivalence."""
    d = pauli_decomposition(rho)
    t1, t2, m = d.t1, d.t2, d.t12
    mmt = m @ m.T
    mtm = m.T @ m
    powers = [np.eye(3), mmt, mmt @ mmt]
    powers_t = [np.eye(3), mtm, mtm @ mtm]
    return InvariantSet(
        ip_t1=np.array([t1 @ p @ t1 for p in powers]),
        ip_t2=np.array([t2 @ p @ t2 for p in powers_t]),
        ip_cross=np.array([t1 @ p @ m @ t2 for p in powers]),
        traces=np.array([np.trace(mmt), np.trace(mmt @ mmt), np.trace(mmt @ mmt @ mmt)]),
        det_t12=float(np.linalg.det(m)),
    )


def lu_equivalent(rho_a, rho_b, tol: float = 1e-3):
    """Compare all 13 invariants; returns ``(equivalent, residuals)``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    res = np.abs(lu_invariants(rho_a).as_array() - lu_invariants(rho_b).as_array())
    return bool(np.all(res <= tol)), res


def bell_states() -> dict[str, np.ndarray]:
    """The four Bell kets in the (gg, gr, rg, rr) basis."""
    gg, gr, rg, rr = np.eye(4, dtype=complex)
    return {
        "phi+": (gg + rr) / SQRT2,
        "phi-": (gg - rr) / SQRT2,
        "psi+": (gr + rg) / SQRT2,
        "psi-": (gr - rg) / SQRT2,
    }
