"""Hamiltonians, sweep schedules and adiabatic states for one and two atoms.

Units: the Rabi frequency sets the energy scale (``omega = 1`` by default),
time is in ``1/omega``, the sweep rate in ``omega**2``, and ``hbar = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath
from .errors import DomainError

SQRT2 = np.sqrt(2.0)

# number of Rydberg excitations per basis state
EXCITATIONS = {
    "single": np.array([0.0, 1.0]),
    "pair_symmetric": np.array([0.0, 1.0, 2.0]),
    "pair_full": np.array([0.0, 1.0, 1.0, 2.0]),
}

# columns map (gg, s, rr) into (gg, gr, rg, rr)
SYMMETRIC_EMBEDDING = np.array(
    [[1, 0, 0], [0, 1 / SQRT2, 0], [0, 1 / SQRT2, 0], [0, 0, 1]], dtype=complex
)

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


@dataclass(frozen=True)
class SweepSchedule:
    """Linear detuning ramp ``delta(t) = v t`` from ``delta_start`` to ``delta_end``.

    The time origin is the point where the detuning crosses zero, so the ramp
    occupies ``t in [delta_start/v, delta_end/v]``.
    """

    v: float
    omega: float = 1.0
    delta_start: float = -100.0
    delta_end: float = 100.0
    v0: float = 0.0

    def __post_init__(self):
        if not self.v > 0:
            raise DomainError(f"sweep rate must be positive, got {self.v}")
        if not self.delta_start < self.delta_end:
            raise DomainError("delta_start must be below delta_end")
        if self.v0 < 0:
            raise DomainError("interaction strength v0 must be >= 0")
        if self.omega < 0:
            raise DomainError("omega must be >= 0")

    @property
    def t_start(self) -> float:
        return self.delta_start / self.v

    @property
    def t_end(self) -> float:
        return self.delta_end / self.v

    def delta(self, t):
        """Detuning at time ``t``; held at ``delta_end`` after the ramp."""
        return np.minimum(self.v * np.asarray(t, dtype=float), self.delta_end)

    def with_(self, **changes) -> "SweepSchedule":
        fields = dict(v=self.v, omega=self.omega, delta_start=self.delta_start,
                      delta_end=self.delta_end, v0=self.v0)
        fields.update(changes)
        return SweepSchedule(**fields)


@dataclass(frozen=True)
class DissipationSpec:
    gamma: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError(f"decay rate must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class AdiabaticPair:
    e_plus: float
    e_minus: float
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    beta_plus: float
    beta_minus: float
    omega_bar: float


def single_atom_hamiltonian(delta: float, omega: float) -> np.ndarray:
    """``-delta |r><r| + (omega/2) sigma_x`` in the (g, r) basis."""
    return -delta * qmath.SIGMA_RR + 0.5 * omega * qmath.SIGMA_X


def pair_hamiltonian(delta: float, omega: float, v0: float) -> np.ndarray:
    """Two-atom Hamiltonian in the (gg, gr, rg, rr) basis."""
    n1 = qmath.kron(qmath.SIGMA_RR, qmath.IDENTITY2)
    n2 = qmath.kron(qmath.IDENTITY2, qmath.SIGMA_RR)
    sx = qmath.kron(qmath.SIGMA_X, qmath.IDENTITY2) + qmath.kron(qmath.IDENTITY2, qmath.SIGMA_X)
    return -delta * (n1 + n2) + 0.5 * omega * sx + v0 * (n1 @ n2)


def pair_hamiltonian_symmetric(delta: float, omega: float, v0: float) -> np.ndarray:
    """Two-atom Hamiltonian restricted to the exchange-symmetric sector (gg, s, rr)."""
    c = omega / SQRT2
    return np.array(
        [[0.0, c, 0.0], [c, -delta, c], [0.0, c, -2.0 * delta + v0]], dtype=complex
    )


def coupling_part(mode: str, omega: float, v0: float) -> np.ndarray:
    """Detuning-independent part of the Hamiltonian for a propagation mode."""
    if mode == "single":
        return single_atom_hamiltonian(0.0, omega)
    if mode == "pair_symmetric":
        return pair_hamiltonian_symmetric(0.0, omega, v0)
    if mode == "pair_full":
        return pair_hamiltonian(0.0, omega, v0)
    raise ValueError(f"unknown mode {mode!r}")


def adiabatic_states(delta: float, omega: float) -> AdiabaticPair:
    """Instantaneous eigenstates of the single-atom Hamiltonian.

    ``phi_plus`` is the upper state (energy ``+omega/2 * beta_minus``). At large
    positive detuning it approaches ``|g>``, at large negative detuning ``|r>``.
    """
    if omega == 0:
        raise DomainError("adiabatic states are undefined for a vanishing gap (omega = 0)")
    omega_bar = float(np.hypot(delta, omega))
    beta_p = (omega_bar + delta) / omega
    beta_m = (omega_bar - delta) / omega
    # the small beta loses precision by cancellation at large |delta|
    if delta > 0:
        beta_m = omega / (omega_bar + delta)
    elif delta < 0:
        beta_p = omega / (omega_bar - delta)
    norm = np.sqrt(omega / (2.0 * omega_bar))
    phi_p = norm * np.array([np.sqrt(beta_p), np.sqrt(beta_m)], dtype=complex)
    phi_m = norm * np.array([-np.sqrt(beta_m), np.sqrt(beta_p)], dtype=complex)
    return AdiabaticPair(
        e_plus=0.5 * omega * beta_m,
        e_minus=-0.5 * omega * beta_p,
        phi_plus=phi_p,
        phi_minus=phi_m,
        beta_plus=beta_p,
        beta_minus=beta_m,
        omega_bar=omega_bar,
    )


def crossing_detunings(v0: float) -> tuple[float, float, float]:
    """Detunings of the gg-s, gg-rr and s-rr diabatic degeneracies."""
    if v0 < 0:
        raise DomainError("v0 must be >= 0")
    return (0.0, 0.5 * v0, float(v0))


def embed_symmetric(psi3) -> np.ndarray:
    """Map a (gg, s, rr) amplitude vector into the full 4-dim pair basis."""
    psi3 = np.asarray(psi3, dtype=complex)
    return psi3 @ SYMMETRIC_EMBEDDING.T


def symmetric_state(a_gg, a_s, a_rr, theta1=0.0, theta2=0.0) -> np.ndarray:
    """``a_gg|gg> + a_s e^{i theta1}|s> + a_rr e^{i theta2}|rr>`` in the symmetric basis."""
    return np.array([a_gg, a_s * np.exp(1j * theta1), a_rr * np.exp(1j * theta2)], dtype=complex)


def basis_state(label: str) -> np.ndarray:
    """Diabatic basis ket by label: 'g', 'r', 'gg', 'gr', 'rg', 'rr' or 's'."""
    singles = {"g": 0, "r": 1}
    pairs = {"gg": 0, "gr": 1, "rg": 2, "rr": 3}
    if label in singles:
        out = np.zeros(2, dtype=complex)
        out[singles[label]] = 1.0
    elif label in pairs:
        out = np.zeros(4, dtype=complex)
        out[pairs[label]] = 1.0
    elif label == "s":
        out = np.array([0, 1, 1, 0], dtype=complex) / SQRT2
    else:
        raise ValueError(f"unknown basis label {label!r}")
    return out
