"""Compiled fixed-step RK4 loops.

Both propagators work in the frame co-rotating with the detuning term
``-delta(t) * N`` (``N`` counts Rydberg excitations). The frame phase
``Phi(t) = int delta dt`` is known in closed form for a linear ramp followed by
a hold, so only the drive and interaction terms are integrated numerically:

    H_I(t)[j, k] = H1[j, k] * exp(-i Phi(t) (N_j - N_k))

The decay operators lower ``N`` by one, so the dissipator is unchanged by the
frame transformation. Lab-frame snapshots are ``exp(i Phi N) psi_I``.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def frame_phase(t, t0, t_ramp_end, v, delta_end):
    if t <= t_ramp_end:
        return 0.5 * v * (t * t - t0 * t0)
    return 0.5 * v * (t_ramp_end * t_ramp_end - t0 * t0) + delta_end * (t - t_ramp_end)


@njit(cache=True, nogil=True)
def _rotated(h1, nexc, phi, out):
    d = h1.shape[0]
    for j in range(d):
        for k in range(d):
            if h1[j, k] != 0:
                out[j, k] = h1[j, k] * np.exp(-1j * phi * (nexc[j] - nexc[k]))
            else:
                out[j, k] = 0.0


@njit(cache=True, nogil=True)
def _apply(h, psi, out):
    # out = -i h psi
    d = h.shape[0]
    for j in range(d):
        acc = 0j
        for k in range(d):
            acc += h[j, k] * psi[k]
        out[j] = -1j * acc


@njit(cache=True, nogil=True)
def schrodinger_rk4(h1, nexc, psi0, t0, t_ramp_end, v, delta_end, dt, n_steps, stride):
    d = psi0.shape[0]
    n_out = n_steps // stride + 2
    times = np.empty(n_out)
    phis = np.empty(n_out)
    states = np.empty((n_out, d), dtype=np.complex128)
    drifts = np.empty(n_out)

    psi = psi0.copy()
    h_a = np.empty((d, d), dtype=np.complex128)
    h_b = np.empty((d, d), dtype=np.complex128)
    h_c = np.empty((d, d), dtype=np.complex128)
    k1 = np.empty(d, dtype=np.complex128)
    k2 = np.empty(d, dtype=np.complex128)
    k3 = np.empty(d, dtype=np.complex128)
    k4 = np.empty(d, dtype=np.complex128)
    tmp = np.empty(d, dtype=np.complex128)

    times[0] = t0
    phis[0] = 0.0
    for j in range(d):
        states[0, j] = psi[j]
    drifts[0] = 0.0

    _rotated(h1, nexc, 0.0, h_a)
    max_drift = 0.0
    window_drift = 0.0
    out = 1
    for step in range(1, n_steps + 1):
        t = t0 + (step - 1) * dt
        tm = t + 0.5 * dt
        tn = t0 + step * dt
        _rotated(h1, nexc, frame_phase(tm, t0, t_ramp_end, v, delta_end), h_b)
        _rotated(h1, nexc, frame_phase(tn, t0, t_ramp_end, v, delta_end), h_c)

        _apply(h_a, psi, k1)
        for j in range(d):
            tmp[j] = psi[j] + 0.5 * dt * k1[j]
        _apply(h_b, tmp, k2)
        for j in range(d):
            tmp[j] = psi[j] + 0.5 * dt * k2[j]
        _apply(h_b, tmp, k3)
        for j in range(d):
            tmp[j] = psi[j] + dt * k3[j]
        _apply(h_c, tmp, k4)

        nrm2 = 0.0
        for j in range(d):
            psi[j] = psi[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            nrm2 += psi[j].real ** 2 + psi[j].imag ** 2
        nrm = np.sqrt(nrm2)
        drift = abs(nrm - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > window_drift:
            window_drift = drift
        for j in range(d):
            psi[j] = psi[j] / nrm

        for j in range(d):
            for k in range(d):
                h_a[j, k] = h_c[j, k]

        if step % stride == 0 or step == n_steps:
            phi = frame_phase(tn, t0, t_ramp_end, v, delta_end)
            times[out] = tn
            phis[out] = phi
            for j in range(d):
                states[out, j] = np.exp(1j * phi * nexc[j]) * psi[j]
            drifts[out] = window_drift
            window_drift = 0.0
            out += 1
    return times[:out], states[:out], phis[:out], drifts[:out], max_drift


@njit(cache=True, nogil=True)
def _lindblad_rhs(h, rho, cops, cdc, out):
    d = rho.shape[0]
    n_c = cops.shape[0]
    # -i [h, rho] - 1/2 {C^dag C, rho}
    for j in range(d):
        for k in range(d):
            acc = 0j
            for m in range(d):
                acc += -1j * (h[j, m] * rho[m, k] - rho[j, m] * h[m, k])
                acc += -0.5 * (cdc[j, m] * rho[m, k] + rho[j, m] * cdc[m, k])
            out[j, k] = acc
    # C rho C^dag
    for c in range(n_c):
        for j in range(d):
            for k in range(d):
                acc = 0j
                for m in range(d):
                    if cops[c, j, m] == 0:
                        continue
                    for n in range(d):
                        if cops[c, k, n] == 0:
                            continue
                        acc += cops[c, j, m] * rho[m, n] * np.conj(cops[c, k, n])
                out[j, k] += acc


@njit(cache=True, nogil=True)
def lindblad_rk4(h1, nexc, rho0, cops, t0, t_ramp_end, v, delta_end, dt, n_steps, stride):
    d = rho0.shape[0]
    n_out = n_steps // stride + 2
    times = np.empty(n_out)
    phis = np.empty(n_out)
    rhos = np.empty((n_out, d, d), dtype=np.complex128)
    drifts = np.empty(n_out)

    cdc = np.zeros((d, d), dtype=np.complex128)
    for c in range(cops.shape[0]):
        for j in range(d):
            for k in range(d):
                acc = 0j
                for m in range(d):
                    acc += np.conj(cops[c, m, j]) * cops[c, m, k]
                cdc[j, k] += acc

    rho = rho0.copy()
    h_a = np.empty((d, d), dtype=np.complex128)
    h_b = np.empty((d, d), dtype=np.complex128)
    h_c = np.empty((d, d), dtype=np.complex128)
    k1 = np.empty((d, d), dtype=np.complex128)
    k2 = np.empty((d, d), dtype=np.complex128)
    k3 = np.empty((d, d), dtype=np.complex128)
    k4 = np.empty((d, d), dtype=np.complex128)
    tmp = np.empty((d, d), dtype=np.complex128)

    times[0] = t0
    phis[0] = 0.0
    rhos[0] = rho
    drifts[0] = 0.0
    _rotated(h1, nexc, 0.0, h_a)
    max_drift = 0.0
    window_drift = 0.0
    out = 1
    for step in range(1, n_steps + 1):
        t = t0 + (step - 1) * dt
        tm = t + 0.5 * dt
        tn = t0 + step * dt
        _rotated(h1, nexc, frame_phase(tm, t0, t_ramp_end, v, delta_end), h_b)
        _rotated(h1, nexc, frame_phase(tn, t0, t_ramp_end, v, delta_end), h_c)

        _lindblad_rhs(h_a, rho, cops, cdc, k1)
        for j in range(d):
            for k in range(d):
                tmp[j, k] = rho[j, k] + 0.5 * dt * k1[j, k]
        _lindblad_rhs(h_b, tmp, cops, cdc, k2)
        for j in range(d):
            for k in range(d):
                tmp[j, k] = rho[j, k] + 0.5 * dt * k2[j, k]
        _lindblad_rhs(h_b, tmp, cops, cdc, k3)
        for j in range(d):
            for k in range(d):
                tmp[j, k] = rho[j, k] + dt * k3[j, k]
        _lindblad_rhs(h_c, tmp, cops, cdc, k4)

        for j in range(d):
            for k in range(d):
                tmp[j, k] = rho[j, k] + dt / 6.0 * (k1[j, k] + 2.0 * k2[j, k] + 2.0 * k3[j, k] + k4[j, k])
        tr = 0.0
        for j in range(d):
            for k in range(d):
                rho[j, k] = 0.5 * (tmp[j, k] + np.conj(tmp[k, j]))
            tr += rho[j, j].real
        drift = abs(tr - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > window_drift:
            window_drift = drift

        for j in range(d):
            for k in range(d):
                h_a[j, k] = h_c[j, k]

        if step % stride == 0 or step == n_steps:
            phi = frame_phase(tn, t0, t_ramp_end, v, delta_end)
            times[out] = tn
            phis[out] = phi
            for j in range(d):
                for k in range(d):
                    rhos[out, j, k] = np.exp(1j * phi * (nexc[j] - nexc[k])) * rho[j, k]
            drifts[out] = window_drift
            window_drift = 0.0
            out += 1
    return times[:out], rhos[:out], phis[:out], drifts[:out], max_drift
