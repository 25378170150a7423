"""Oscillation diagnostics for sampled trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import detrend

from .errors import InsufficientDataError, InvalidInputError
from .integrators import Trajectory

__all__ = [
    "SpectralPeak",
    "WindowStats",
    "OscillationReport",
    "dominant_period",
    "phase_lag",
    "windowed_stats",
    "oscillation_report",
    "MIN_SAMPLES",
]

MIN_SAMPLES = 64
FLAT_VARIANCE = 1e-15


@dataclass(frozen=True)
class SpectralPeak:
    """Dominant spectral line of a series.

    ``period`` and ``frequency`` are ``None`` for a flat series.
    ``sharpness`` is the peak magnitude over the median spectral magnitude.
    """

    period: float | None
    frequency: float | None
    amplitude: float
    sharpness: float = 0.0

    @property
    def oscillating(self) -> bool:
        return self.period is not None


@dataclass(frozen=True)
class WindowStats:
    mean_r: float
    mean_c: float
    var_r: float
    var_c: float
    n: int


@dataclass(frozen=True)
class OscillationReport:
    dominant_period: float | None
    dominant_frequency: float | None
    peak_amplitude: float
    mean_r: float
    mean_c: float
    var_r: float
    var_c: float
    lag_rc: float | None
    amplitude_c: float = 0.0
    sharpness_r: float = 0.0
    sharpness_c: float = 0.0


def _as_series(x, name="series") -> np.ndarray:
    a = np.asarray(x, dtype=float).reshape(-1)
    if len(a) < MIN_SAMPLES:
        raise InsufficientDataError(f"{name} has {len(a)} samples; at least {MIN_SAMPLES} required")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return a


def dominant_period(series, dt: float) -> SpectralPeak:
    """Dominant period of a uniformly sampled series.

    The mean is removed, a Hann window applied, and the largest non-DC bin of
    the magnitude spectrum refined by a parabola through it and its two
    neighbours. The amplitude is half the peak-to-trough range of the
    mean-removed series.
    """
    x = _as_series(series)
    if not dt > 0:
        raise InvalidInputError(f"dt must be > 0, got {dt}")
    x = x - x.mean()
    if x.var() < FLAT_VARIANCE:
        return SpectralPeak(None, None, 0.0, 0.0)
    n = len(x)
    mag = np.abs(np.fft.rfft(x * np.hanning(n)))
    k = int(np.argmax(mag[1:])) + 1
    shift = 0.0
    if 1 <= k < len(mag) - 1:
        a, b, c = mag[k - 1], mag[k], mag[k + 1]
        den = a - 2.0 * b + c
        if den != 0.0:
            shift = 0.5 * (a - c) / den
    kf = k + shift
    if kf <= 0:
        kf = float(k)
    period = float(n * dt / kf)
    amplitude = 0.5 * float(x.max() - x.min())
    med = float(np.median(mag[1:]))
    sharp = float(mag[k] / med) if med > 0 else math.inf
    return SpectralPeak(period, 2.0 * math.pi / period, amplitude, sharp)


def phase_lag(r_series, c_series, dt: float, max_lag: float | None = None) -> float:
    """Lag (time) maximising the Pearson correlation of ``r[i]`` with ``c[i + lag]``.

    Positive when the predator series trails the prey. Lags are searched over
    plus or minus half the dominant period of the prey series unless
    ``max_lag`` is given; a wider window admits aliases one period away.
    """
    r = _as_series(r_series, "r_series")
    c = _as_series(c_series, "c_series")
    if len(r) != len(c):
        raise InvalidInputError("series must have equal lengths")
    n = len(r)
    r = detrend(r)
    c = detrend(c)
    if max_lag is None:
        pk = dominant_period(r, dt)
        if pk.period is None:
            pk = dominant_period(c, dt)
        max_lag = 0.5 * pk.period if pk.period is not None else n * dt / 4
    L = min(int(round(max_lag / dt)), n - 2)
    best_lag, best = 0, -math.inf
    for lag in range(-L, L + 1):
        if lag >= 0:
            a, b = r[: n - lag], c[lag:]
        else:
            a, b = r[-lag:], c[: n + lag]
        a = a - a.mean()
        b = b - b.mean()
        den = math.sqrt(float(a @ a) * float(b @ b))
        if den == 0.0:
            continue
        rho = float(a @ b) / den
        # ties go to the smaller magnitude lag, keeping the result antisymmetric
        if rho > best or (rho == best and abs(lag) < abs(best_lag)):
            best, best_lag = rho, lag
    return best_lag * dt


def windowed_stats(traj: Trajectory, window: tuple[float, float]) -> WindowStats:
    t_start, t_end = window
    if len(traj) and (t_start < traj.times[0] - 1e-9 or t_end > traj.times[-1] + 1e-9):
        raise InsufficientDataError(
            f"window [{t_start}, {t_end}] lies outside the trajectory span "
            f"[{traj.times[0]}, {traj.times[-1]}]"
        )
    mask = (traj.times >= t_start) & (traj.times <= t_end)
    n = int(mask.sum())
    if n == 0:
        raise InsufficientDataError(f"no samples in window [{t_start}, {t_end}]")
    r, c = traj.r[mask], traj.c[mask]
    return WindowStats(float(r.mean()), float(c.mean()), float(r.var()), float(c.var()), n)


def steady_window(traj: Trajectory) -> tuple[float, float]:
    """Second half of the trajectory's time span."""
    t0, t1 = float(traj.times[0]), float(traj.times[-1])
    return 0.5 * (t0 + t1), t1


def oscillation_report(traj: Trajectory) -> OscillationReport:
    """Period, amplitude and lag from the whole series; moments from the steady window."""
    if len(traj) < MIN_SAMPLES:
        raise InsufficientDataError(f"trajectory has {len(traj)} samples; at least {MIN_SAMPLES} required")
    steps = np.diff(traj.times)
    dt = float(np.median(steps))
    if np.max(np.abs(steps - dt)) > 1e-6 * dt:
        # only the last step of a run may be shorter; drop it
        if np.max(np.abs(steps[:-1] - dt)) > 1e-6 * dt:
            raise InvalidInputError("trajectory is not uniformly sampled")
        traj = Trajectory(traj.times[:-1], traj.r[:-1], traj.c[:-1])
    pr = dominant_period(traj.r, dt)
    pc = dominant_period(traj.c, dt)
    lag = None
    if pr.oscillating or pc.oscillating:
        lag = phase_lag(traj.r, traj.c, dt)
    st = windowed_stats(traj, steady_window(traj))
    return OscillationReport(
        dominant_period=pr.period,
        dominant_frequency=pr.frequency,
        peak_amplitude=pr.amplitude,
        mean_r=st.mean_r,
        mean_c=st.mean_c,
        var_r=st.var_r,
        var_c=st.var_c,
        lag_rc=lag,
        amplitude_c=pc.amplitude,
        sharpness_r=pr.sharpness,
        sharpness_c=pc.sharpness,
    )
