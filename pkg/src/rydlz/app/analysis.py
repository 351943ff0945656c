"""Post-processing of sampled series: maxima, oscillation statistics, decay fits."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks


@dataclass(frozen=True)
class OscStats:
    s_max: float
    s_min: float
    s_amp: float
    period: float
    window: tuple[float, float]
    n_maxima: int = 0


@dataclass(frozen=True)
class DecayFitResult:
    c1: float
    c2: float
    c3: float
    residuals: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    window: tuple[float, float] = (np.nan, np.nan)

    @property
    def converged(self) -> bool:
        return not self.flags


def detect_maxima(times, y, min_prominence: float = 1e-3):
    """Local maxima (three-point test) refined by a parabola through the neighbours.

    Maxima with prominence below ``min_prominence`` are discarded as numerical
    ripple. Returns ``(t_peaks, y_peaks)``.
    """
    times = np.asarray(times, dtype=float)
    y = np.asarray(y, dtype=float)
    idx, _ = find_peaks(y, prominence=min_prominence)
    t_out, y_out = [], []
    for i in idx:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        shift = float(np.clip(shift, -0.5, 0.5))
        h = 0.5 * (times[i + 1] - times[i - 1])
        t_out.append(times[i] + shift * h)
        y_out.append(y1 - 0.25 * (y0 - y2) * shift)
    return np.array(t_out), np.array(y_out)


def oscillation_window(v0: float, v: float, omega: float = 1.0, ramp_end: float | None = None):
    """Start of the post-sweep analysis window: past the last crossing with delta > 20 omega."""
    t = (v0 + 20.0 * omega) / v
    if ramp_end is not None:
        t = min(t, ramp_end)
    return t


def oscillation_stats(times, s, t_start: float, min_prominence: float = 1e-3) -> OscStats:
    times = np.asarray(times)
    s = np.asarray(s)
    w = times >= t_start
    if w.sum() < 3:
        raise ValueError("analysis window holds fewer than three samples")
    tw, sw = times[w], s[w]
    tp, _ = detect_maxima(tw, sw, min_prominence)
    period = float(np.median(np.diff(tp))) if tp.size >= 2 else float("nan")
    s_max, s_min = float(sw.max()), float(sw.min())
    return OscStats(s_max=s_max, s_min=s_min, s_amp=s_max - s_min, period=period,
                    window=(float(tw[0]), float(tw[-1])), n_maxima=int(tp.size))


def _loglinear_rate(t, y):
    slope, icpt = np.polyfit(t, np.log(y), 1)
    resid = np.log(y) - (slope * t + icpt)
    return -slope, float(np.sqrt(np.mean(resid ** 2)))


def fit_decay_constants(traj, gamma: float, tail_fraction: float = 0.25) -> DecayFitResult:
    """Exponential rates of the tail populations in units of ``gamma``.

    Fits ``1 - rho_gg ~ exp(-c1 gamma t)``, ``rho_s ~ exp(-c2 gamma t)`` and
    ``rho_rr ~ exp(-c3 gamma t)`` by least squares on the logarithm over the last
    ``tail_fraction`` of the run. A series with non-positive values in the
    window is skipped and flagged.
    """
    if not 0 < tail_fraction <= 0.5:
        raise ValueError("tail_fraction must lie in (0, 0.5]")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    t = np.asarray(traj.times)
    pops = traj.populations
    t_cut = t[-1] - tail_fraction * (t[-1] - t[0])
    w = t >= t_cut
    series = {"c1": 1.0 - pops["gg"], "c2": pops["s"], "c3": pops["rr"]}
    rates, residuals, flags = {}, {}, {}
    for name, y in series.items():
        yw = y[w]
        if np.any(yw <= 0) or yw.size < 3:
            rates[name] = float("nan")
            flags[name] = "non-positive values in fit window"
            continue
        c, rms = _loglinear_rate(gamma * t[w], yw)
        rates[name] = float(c)
        residuals[name] = rms
        if not c > 0:
            flags[name] = "non-positive rate"
    return DecayFitResult(c1=rates["c1"], c2=rates["c2"], c3=rates["c3"], residuals=residuals,
                          flags=flags, window=(float(t[w][0]), float(t[w][-1])))
