"""Unitary and dissipative propagation, phase extraction and closed-form predictors."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import model, qmath
from ._kernels import lindblad_rk4, schrodinger_rk4
from .errors import ContractViolation, DomainError, StepSizeError

DEFAULT_DT = 1e-3
NORM_TOL = 1e-6  # pre-renormalisation drift that triggers dt halving
POSITIVITY_TOL = 1e-6
PHASE_REF_MIN = 1e-6


class RegimeWarning(UserWarning):
    """A closed-form predictor is used outside its stated validity regime."""


@dataclass
class Trajectory:
    """Sampled time evolution.

    ``states`` holds lab-frame kets (coherent runs) and ``rho`` density matrices
    (dissipative runs); exactly one of them is set. ``frame_phase`` is the
    integrated detuning ``int delta dt`` at each sample, used when unwrapping phases.
    """

    times: np.ndarray
    mode: str
    schedule: model.SweepSchedule
    frame_phase: np.ndarray
    states: np.ndarray | None = None
    rho: np.ndarray | None = None
    hold: float = 0.0
    dt: float = DEFAULT_DT
    halvings: int = 0
    drift: np.ndarray | None = None
    max_drift: float = 0.0
    min_eigenvalue: float | None = None
    theta1: np.ndarray | None = None
    theta2: np.ndarray | None = None
    phi_single: np.ndarray | None = None
    phase_defined: np.ndarray | None = None
    extras: dict = field(default_factory=dict)

    @property
    def populations(self) -> dict[str, np.ndarray]:
        """Diabatic populations; pair runs report (gg, s, rr) plus the antisymmetric part in full mode."""
        if self.states is not None:
            p = np.abs(self.states) ** 2
            if self.mode == "single":
                return {"g": p[:, 0], "r": p[:, 1]}
            if self.mode == "pair_symmetric":
                return {"gg": p[:, 0], "s": p[:, 1], "rr": p[:, 2]}
            s = np.abs(self.states[:, 1] + self.states[:, 2]) ** 2 / 2
            a = np.abs(self.states[:, 1] - self.states[:, 2]) ** 2 / 2
            return {"gg": p[:, 0], "s": s, "a": a, "rr": p[:, 3]}
        r = self.rho
        diag = np.real(np.einsum("tii->ti", r))
        if r.shape[1] == 2:
            return {"g": diag[:, 0], "r": diag[:, 1]}
        off = np.real(r[:, 1, 2])
        return {
            "gg": diag[:, 0],
            "s": 0.5 * (diag[:, 1] + diag[:, 2]) + off,
            "a": 0.5 * (diag[:, 1] + diag[:, 2]) - off,
            "rr": diag[:, 3],
        }

    @property
    def pair_phase(self) -> np.ndarray:
        """``2 theta1 - theta2``, the angle that controls the pair entanglement."""
        if self.theta1 is None:
            raise ValueError("phases not extracted; call relative_phases first")
        return 2.0 * self.theta1 - self.theta2

    def density_matrices(self) -> np.ndarray:
        """Full-basis density matrices for every sample (pair runs only for kets)."""
        if self.rho is not None:
            return self.rho
        psi = self.states
        if self.mode == "pair_symmetric":
            psi = model.embed_symmetric(psi)
        return np.einsum("ti,tj->tij", psi, psi.conj())


def _time_grid(schedule: model.SweepSchedule, dt: float, hold: float):
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if hold < 0:
        raise DomainError("hold time must be >= 0")
    t0 = schedule.t_start
    t_final = schedule.t_end + hold
    n_steps = int(np.ceil((t_final - t0) / dt - 1e-9))
    return t0, n_steps, (t_final - t0) / n_steps


def _collapse_operators(gamma: float) -> np.ndarray:
    c = np.sqrt(gamma)
    return np.array([
        c * qmath.kron(qmath.SIGMA_GR, qmath.IDENTITY2),
        c * qmath.kron(qmath.IDENTITY2, qmath.SIGMA_GR),
    ])


def propagate_schrodinger(psi0, schedule: model.SweepSchedule, dt: float = DEFAULT_DT,
                          mode: str = "pair_symmetric", *, hold: float = 0.0, stride: int = 10,
                          max_halvings: int = 4) -> Trajectory:
    """Fixed-step RK4 solution of ``i d/dt psi = H(t) psi`` over the sweep (plus optional hold).

    The state is renormalised after each step; the pre-renormalisation norm
    deviation is recorded. If it exceeds ``NORM_TOL`` the step is halved (keeping
    the output grid) up to ``max_halvings`` times before ``StepSizeError``.
    Samples are taken every ``stride`` steps and at the final step.
    """
    nexc = model.EXCITATIONS[mode]
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != nexc.shape:
        raise ValueError(f"initial state has shape {psi0.shape}, mode {mode!r} needs {nexc.shape}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-8:
        raise ContractViolation("initial state is not normalised")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    h1 = model.coupling_part(mode, schedule.omega, schedule.v0)
    t0, n_steps, step = _time_grid(schedule, dt, hold)
    for halvings in range(max_halvings + 1):
        scale = 2 ** halvings
        times, states, phis, drifts, max_drift = schrodinger_rk4(
            h1, nexc, psi0, t0, schedule.t_end, schedule.v, schedule.delta_end,
            step / scale, n_steps * scale, stride * scale)
        if max_drift <= NORM_TOL:
            break
    else:
        raise StepSizeError(
            f"norm drift {max_drift:.2e} exceeds {NORM_TOL:.0e} even at dt={step / scale:.2e}; "
            "use a smaller dt")
    return Trajectory(times=times, mode=mode, schedule=schedule, frame_phase=phis, states=states,
                      hold=hold, dt=step / scale, halvings=halvings, drift=drifts,
                      max_drift=float(max_drift))


def propagate_lindblad(rho0, schedule: model.SweepSchedule, dissipation: model.DissipationSpec,
                       dt: float = DEFAULT_DT, *, hold: float = 0.0, stride: int = 10,
                       max_halvings: int = 4) -> Trajectory:
    """Fixed-step RK4 solution of the two-atom master equation.

    Each atom decays through ``sqrt(gamma) |g><r|``. The density matrix is
    re-symmetrised every step; positivity is checked on the output samples.
    """
    rho0 = qmath.check_density_matrix(rho0, dims=(4,))
    if stride < 1:
        raise ValueError("stride must be >= 1")
    nexc = model.EXCITATIONS["pair_full"]
    h1 = model.coupling_part("pair_full", schedule.omega, schedule.v0)
    cops = _collapse_operators(dissipation.gamma)
    t0, n_steps, step = _time_grid(schedule, dt, hold)
    for halvings in range(max_halvings + 1):
        scale = 2 ** halvings
        times, rhos, phis, drifts, max_drift = lindblad_rk4(
            h1, nexc, rho0, cops, t0, schedule.t_end, schedule.v, schedule.delta_end,
            step / scale, n_steps * scale, stride * scale)
        min_eig = float(np.linalg.eigvalsh(rhos).min())
        if max_drift <= NORM_TOL and min_eig >= -POSITIVITY_TOL:
            break
    else:
        raise StepSizeError(
            f"trace drift {max_drift:.2e} / min eigenvalue {min_eig:.2e} out of tolerance "
            f"at dt={step / scale:.2e}; use a smaller dt")
    return Trajectory(times=times, mode="pair_full", schedule=schedule, frame_phase=phis, rho=rhos,
                      hold=hold, dt=step / scale, halvings=halvings, drift=drifts,
                      max_drift=float(max_drift), min_eigenvalue=min_eig,
                      extras={"gamma": dissipation.gamma})


def _continuous(lab, frame, n_diff):
    # Each increment is taken in whichever frame turns less over the interval:
    # the lab frame while the pair follows the drive adiabatically, the frame
    # co-rotating with the detuning once it precesses freely.
    d_lab = np.angle(np.exp(1j * np.diff(lab)))
    d_rot = np.angle(np.exp(1j * (np.diff(lab) - n_diff * np.diff(frame))))
    step = np.where(np.abs(d_lab) <= np.abs(d_rot), d_lab, d_rot + n_diff * np.diff(frame))
    return lab[0] + np.concatenate([[0.0], np.cumsum(step)])


def _unwrapped_relative_phase(ref, amp, frame, n_diff, defined, times):
    lab = np.angle(amp) - np.angle(ref)
    out = np.full(lab.shape, np.nan)
    if defined.any():
        out[defined] = _continuous(lab[defined], frame[defined], n_diff)
        if not defined.all():
            out[~defined] = np.interp(times[~defined], times[defined], out[defined])
    return out


def relative_phases(traj: Trajectory) -> Trajectory:
    """Attach unwrapped relative phases to a coherent trajectory.

    Pair runs get ``theta1 = arg a_s - arg a_gg`` and ``theta2 = arg a_rr - arg a_gg``;
    single-atom runs get ``phi_single = arg a_r - arg a_g``. Samples whose
    reference amplitude is below 1e-6 are flagged in ``phase_defined`` and
    filled by interpolation.
    """
    if traj.states is None:
        raise ValueError("relative phases need a coherent (state-vector) trajectory")
    st = traj.states
    ref = st[:, 0]
    defined = np.abs(ref) >= PHASE_REF_MIN
    t, frame = traj.times, traj.frame_phase
    if traj.mode == "single":
        phi = _unwrapped_relative_phase(ref, st[:, 1], frame, 1.0, defined, t)
        return replace(traj, phi_single=phi, phase_defined=defined)
    a_s = st[:, 1] if traj.mode == "pair_symmetric" else (st[:, 1] + st[:, 2]) / np.sqrt(2.0)
    th1 = _unwrapped_relative_phase(ref, a_s, frame, 1.0, defined, t)
    th2 = _unwrapped_relative_phase(ref, st[:, -1], frame, 2.0, defined, t)
    return replace(traj, theta1=th1, theta2=th2, phase_defined=defined)


@dataclass(frozen=True)
class AsymptoticPrediction:
    p_lz: float
    q_lz: float
    p_gg_inf: float
    p_rr_inf: float


def lz_probability(omega: float, v: float) -> float:
    """Landau-Zener probability ``exp(-pi omega^2 / (2 v))`` of staying diabatic."""
    if not v > 0:
        raise DomainError(f"sweep rate must be positive, got {v}")
    if np.isinf(v):
        return 1.0
    return float(np.exp(-np.pi * omega ** 2 / (2.0 * v)))


def asymptotic_pair_populations(omega: float, v: float, v0: float) -> AsymptoticPrediction:
    """Long-time pair populations after all three crossings (weak-interaction formulas).

    ``P_gg = P_LZ^2`` and ``P_rr = 1 - Q_LZ^2`` with
    ``Q_LZ = P_LZ exp(-pi omega^2 v0 / (4 v^1.5))``. The pair is not guaranteed to
    satisfy ``P_gg + P_rr <= 1`` outside the weak-interaction regime.
    """
    if v0 < 0:
        raise DomainError("v0 must be >= 0")
    p = lz_probability(omega, v)
    q = p * float(np.exp(-np.pi * omega ** 2 * v0 / (4.0 * v ** 1.5)))
    return AsymptoticPrediction(p_lz=p, q_lz=q, p_gg_inf=p * p, p_rr_inf=1.0 - q * q)


def max_entanglement_times(phase_at_third_crossing: float, v0: float, v: float,
                           n_max: int = 5) -> np.ndarray:
    """Predicted times of the first ``n_max`` entanglement maxima after the sweep.

    ``t_{n+1} = [chi_3 + (2n+1) pi] / v0 + v0 / v`` where ``chi_3`` is
    ``2 theta1 - theta2`` at the last crossing (``t = v0/v``), reduced into
    ``(-pi, pi]``. Valid for ``v0**2 / v << 1``; a ``RegimeWarning`` is emitted
    above 0.1.
    """
    if v0 <= 0:
        raise DomainError("the oscillation period is undefined for v0 = 0")
    if not v > 0:
        raise DomainError("sweep rate must be positive")
    if v0 ** 2 / v > 0.1:
        warnings.warn(f"v0^2/v = {v0 ** 2 / v:.3g} > 0.1; predictor outside its regime",
                      RegimeWarning, stacklevel=2)
    chi3 = float(np.angle(np.exp(1j * phase_at_third_crossing)))
    n = np.arange(n_max)
    return (chi3 + (2 * n + 1) * np.pi) / v0 + v0 / v


def phase_at(traj: Trajectory, t: float) -> float:
    """``2 theta1 - theta2`` linearly interpolated at time ``t``."""
    if traj.theta1 is None:
        traj = relative_phases(traj)
    return float(np.interp(t, traj.times, traj.pair_phase))
