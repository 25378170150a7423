"""Time integration of the non-spatial model.

Methods
-------
rk4
    Classical fixed-step fourth-order Runge-Kutta.
adaptive
    Runge-Kutta-Fehlberg 4(5) with the fourth-order solution propagated.
    Samples between accepted steps come from cubic Hermite interpolation, so
    the step sequence does not depend on the output cadence.
euler-maruyama
    Explicit Euler drift plus additive noise. With no noise configured this
    is plain explicit Euler.

Fixed-step methods place steps at ``t0 + i*dt``; the last step is shortened
to end at ``t1``. Samples are taken every ``stride = floor(sample_every/dt)``
steps, plus the final time.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, InvalidInputError, NumericalError, StiffnessError
from .model import Disturbance, NondimParams, State, make_field

__all__ = [
    "IntegrationSpec",
    "Trajectory",
    "integrate",
    "convergence_order",
    "logistic_exact",
    "LOGISTIC_PARAMS",
    "METHODS",
    "RNG_NAME",
]

METHODS = ("rk4", "adaptive", "euler-maruyama")
RNG_NAME = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class IntegrationSpec:
    method: str = "rk4"
    t0: float = 0.0
    t1: float = 120.0
    dt: float = 0.05
    abs_tol: float = 1e-9
    rel_tol: float = 1e-6
    sample_every: float | None = None  # defaults to dt
    clamp_negative: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"must be one of {METHODS}, got {self.method!r}", "integration.method")
        for name in ("t0", "t1", "dt", "abs_tol", "rel_tol"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError("must be finite", f"integration.{name}")
        if not self.t1 > self.t0:
            raise ConfigError(f"must exceed t0 ({self.t0}), got {self.t1}", "integration.t1")
        if not self.dt > 0:
            raise ConfigError(f"must be > 0, got {self.dt}", "integration.dt")
        if not (self.abs_tol > 0):
            raise ConfigError(f"must be > 0, got {self.abs_tol}", "integration.abs_tol")
        if not (self.rel_tol > 0):
            raise ConfigError(f"must be > 0, got {self.rel_tol}", "integration.rel_tol")
        if self.sample_every is not None and not (self.sample_every >= self.dt):
            raise ConfigError(f"must be >= dt ({self.dt}), got {self.sample_every}", "integration.sample_every")

    @property
    def sample_interval(self) -> float:
        return self.dt if self.sample_every is None else self.sample_every


@dataclass
class Trajectory:
    """Sampled time series of prey ``r`` and predator ``c``."""

    times: np.ndarray
    r: np.ndarray
    c: np.ndarray
    clamp_events: list[tuple[float, str]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float).reshape(-1)
        self.r = np.asarray(self.r, dtype=float).reshape(-1)
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        if not (len(self.times) == len(self.r) == len(self.c)):
            raise InvalidInputError("times, r and c must have equal lengths")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise InvalidInputError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[State]:
        return [State(float(a), float(b)) for a, b in zip(self.r, self.c)]

    @property
    def final(self) -> State:
        return State(float(self.r[-1]), float(self.c[-1]))


def _step_times(spec: IntegrationSpec) -> tuple[int, int]:
    n = max(1, math.ceil((spec.t1 - spec.t0) / spec.dt - 1e-9))
    stride = max(1, math.floor(spec.sample_interval / spec.dt + 1e-9))
    return n, stride


def _rk4_step(f, t, r, c, h):
    k1r, k1c = f(t, r, c)
    k2r, k2c = f(t + 0.5 * h, r + 0.5 * h * k1r, c + 0.5 * h * k1c)
    k3r, k3c = f(t + 0.5 * h, r + 0.5 * h * k2r, c + 0.5 * h * k2c)
    k4r, k4c = f(t + h, r + h * k3r, c + h * k3c)
    return (
        r + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
        c + h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c),
    )


class _Recorder:
    def __init__(self, clamp: bool):
        self.clamp = clamp
        self.times: list[float] = []
        self.r: list[float] = []
        self.c: list[float] = []
        self.events: list[tuple[float, str]] = []

    def clamp_state(self, t, r, c):
        if self.clamp:
            if r < 0.0:
                r = 0.0
                self.events.append((t, "r"))
            if c < 0.0:
                c = 0.0
                self.events.append((t, "c"))
        return r, c

    def add(self, t, r, c):
        self.times.append(t)
        self.r.append(r)
        self.c.append(c)


def _fixed_step(f, spec, s0, noise, rng, rec: _Recorder):
    n, stride = _step_times(spec)
    t0, t1, dt = spec.t0, spec.t1, spec.dt
    r, c = float(s0.r), float(s0.c)
    rec.add(t0, r, c)
    em = spec.method == "euler-maruyama"
    white = colored = False
    if em and noise.active:
        xi = rng.standard_normal((n, 2))
        white = noise.kind == "white"
        colored = noise.kind == "colored"
        eta_r = eta_c = 0.0
        amp = noise.intensity
        ou_amp = amp * math.sqrt(2.0 / noise.tau) if colored else 0.0
    for i in range(n):
        t = t0 + i * dt
        t_next = t1 if i == n - 1 else t0 + (i + 1) * dt
        h = t_next - t
        if em:
            fr, fc = f(t, r, c)
            if colored:
                fr += eta_r
                fc += eta_c
            r_new = r + h * fr
            c_new = c + h * fc
            if white:
                sq = amp * math.sqrt(h)
                r_new += sq * xi[i, 0]
                c_new += sq * xi[i, 1]
            elif colored:
                sq = ou_amp * math.sqrt(h)
                eta_r = eta_r - eta_r / noise.tau * h + sq * xi[i, 0]
                eta_c = eta_c - eta_c / noise.tau * h + sq * xi[i, 1]
            r, c = r_new, c_new
        else:
            r, c = _rk4_step(f, t, r, c, h)
        r, c = rec.clamp_state(t_next, r, c)
        if not (math.isfinite(r) and math.isfinite(c)):
            raise NumericalError(f"state became non-finite at t={t_next:g}; reduce dt")
        if (i + 1) % stride == 0 or i == n - 1:
            rec.add(t_next, r, c)


# Runge-Kutta-Fehlberg 4(5) tableau
_C = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)
_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_B4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)
_B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
_E = tuple(b5 - b4 for b4, b5 in zip(_B4, _B5))


def _rkf45_step(f, t, r, c, h, k1):
    kr = [k1[0]]
    kc = [k1[1]]
    for s in range(1, 6):
        a = _A[s]
        rs = r + h * sum(a[j] * kr[j] for j in range(s))
        cs = c + h * sum(a[j] * kc[j] for j in range(s))
        dr, dc = f(t + _C[s] * h, rs, cs)
        kr.append(dr)
        kc.append(dc)
    r4 = r + h * sum(b * k for b, k in zip(_B4, kr))
    c4 = c + h * sum(b * k for b, k in zip(_B4, kc))
    er = h * sum(e * k for e, k in zip(_E, kr))
    ec = h * sum(e * k for e, k in zip(_E, kc))
    return r4, c4, er, ec


def _hermite(t, ta, tb, ya, yb, fa, fb):
    h = tb - ta
    s = (t - ta) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * ya + h10 * h * fa + h01 * yb + h11 * h * fb


def _adaptive(f, spec, s0, rec: _Recorder):
    t0, t1 = spec.t0, spec.t1
    every = spec.sample_interval
    n_samples = max(1, math.ceil((t1 - t0) / every - 1e-9))
    sample_times = [t0 + k * every for k in range(1, n_samples)] + [t1]
    h_min = spec.dt * 1e-12
    t, r, c = t0, float(s0.r), float(s0.c)
    rec.add(t0, r, c)
    k1 = f(t, r, c)
    h = spec.dt
    nxt = 0
    while t < t1:
        h = min(h, t1 - t)
        if h < h_min and t1 - t > h_min:
            raise StiffnessError(t, h)
        r4, c4, er, ec = _rkf45_step(f, t, r, c, h, k1)
        sc_r = spec.abs_tol + spec.rel_tol * max(abs(r), abs(r4))
        sc_c = spec.abs_tol + spec.rel_tol * max(abs(c), abs(c4))
        err = max(abs(er) / sc_r, abs(ec) / sc_c)
        if not math.isfinite(err):
            h *= 0.2
            continue
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        if err > 1.0:
            h *= factor
            continue
        t_new = t1 if t1 - (t + h) <= h_min else t + h
        r4, c4 = rec.clamp_state(t_new, r4, c4)
        k_new = f(t_new, r4, c4)
        while nxt < len(sample_times) and sample_times[nxt] <= t_new + 1e-12 * max(1.0, abs(t_new)):
            ts = sample_times[nxt]
            if ts >= t_new or nxt == len(sample_times) - 1:
                rs, cs = r4, c4
            else:
                rs = _hermite(ts, t, t_new, r, r4, k1[0], k_new[0])
                cs = _hermite(ts, t, t_new, c, c4, k1[1], k_new[1])
                if rec.clamp:
                    rs, cs = max(rs, 0.0), max(cs, 0.0)
            rec.add(ts, rs, cs)
            nxt += 1
        t, r, c, k1 = t_new, r4, c4, k_new
        h *= factor


def integrate(params: NondimParams, dist: Disturbance, spec: IntegrationSpec, s0: State) -> Trajectory:
    s0 = State(*s0)
    if not (math.isfinite(s0.r) and math.isfinite(s0.c)):
        raise InvalidInputError(f"initial state must be finite, got {tuple(s0)}")
    if s0.r < 0 or s0.c < 0:
        raise InvalidInputError(f"initial state must be nonnegative, got {tuple(s0)}")
    noise = dist.noise
    if noise.kind != "none" and spec.method != "euler-maruyama":
        raise ConfigError(
            f"noise kind {noise.kind!r} requires method 'euler-maruyama', got {spec.method!r}",
            "integration.method",
        )
    f = make_field(params, dist)
    rec = _Recorder(spec.clamp_negative)
    rng = np.random.Generator(np.random.PCG64(int(noise.seed)))
    if spec.method == "adaptive":
        _adaptive(f, spec, s0, rec)
    else:
        _fixed_step(f, spec, s0, noise, rng, rec)
    meta = {
        "params": asdict(params),
        "disturbance": {k: v for k, v in asdict(dist).items() if k != "noise"},
        "noise": asdict(noise),
        "integration": asdict(spec),
        "seed": int(noise.seed),
        "rng": RNG_NAME,
    }
    return Trajectory(np.array(rec.times), np.array(rec.r), np.array(rec.c), rec.events, meta)


LOGISTIC_PARAMS = NondimParams(beta=1.0, alpha=0.0, delta=0.0, q=0.0, effort_E=0.0, sigma=0.0, rho=0.0, mu=0.0)


def logistic_exact(t, r0: float = 0.5, beta: float = 1.0):
    """Exact solution of ``dr/dt = r (beta - r)``."""
    t = np.asarray(t, dtype=float)
    return beta * r0 / (r0 + (beta - r0) * np.exp(-beta * t))


def convergence_order(method: str, dts, t1: float = 1.0, r0: float = 0.5, **tols) -> float:
    """Measured global order on the logistic test problem.

    ``method`` is one of :data:`METHODS` or ``"euler"`` (explicit Euler).
    The order is the least-squares slope of ``log(error)`` against
    ``log(dt)`` where ``error`` is the absolute error at ``t1``.
    """
    dts = np.asarray(dts, dtype=float)
    if len(dts) < 3:
        raise ValueError("need at least three step sizes")
    m = "euler-maruyama" if method == "euler" else method
    errs = []
    exact = float(logistic_exact(t1, r0))
    for dt in dts:
        spec = IntegrationSpec(method=m, t0=0.0, t1=t1, dt=float(dt), clamp_negative=False, **tols)
        traj = integrate(LOGISTIC_PARAMS, Disturbance(), spec, State(r0, 0.0))
        errs.append(abs(traj.r[-1] - exact))
    slope, _ = np.polyfit(np.log(dts), np.log(errs), 1)
    return float(slope)
