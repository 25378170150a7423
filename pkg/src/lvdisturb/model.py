"""Parameter/state types and right-hand sides of the predator-prey models.

Three model levels are provided:

* :func:`lv_classic_rhs` -- classic Lotka-Volterra with a constant human
  harvest term applied to both species.
* :func:`dimensional_rhs` -- logistic growth for both species, Holling
  type-III predation and ``q*E*r`` harvesting.
* :func:`nondim_rhs` -- the dimensionless system with sinusoidal forcing.
  Diffusion is handled in :mod:`lvdisturb.spatial` and stochastic noise in
  :mod:`lvdisturb.integrators`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

__all__ = [
    "ClassicParams",
    "RawParams",
    "NondimParams",
    "NoiseSpec",
    "Disturbance",
    "State",
    "Derivative",
    "lv_classic_rhs",
    "holling",
    "dimensional_rhs",
    "nondim_rhs",
    "reaction",
]

NOISE_KINDS = ("none", "white", "colored")


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise InvalidInputError(f"{name} must be finite, got {v!r}")


def _check_nonneg(obj, names) -> None:
    for name in names:
        v = getattr(obj, name)
        if not math.isfinite(v):
            raise InvalidParameterError(f"{name} must be finite, got {v!r}")
        if v < 0:
            raise InvalidParameterError(f"{name} must be >= 0, got {v!r}")


class State(NamedTuple):
    """Prey density ``r`` and predator density ``c``."""

    r: float
    c: float


class Derivative(NamedTuple):
    dr: float
    dc: float


@dataclass(frozen=True)
class ClassicParams:
    """Coefficients of the harvested classic Lotka-Volterra system.

    ``n_total`` and ``m_harvested`` define the harvest coefficient applied to
    both species, ``a3 = b3 = n_total - m_harvested``.
    """

    a1: float
    a2: float
    b1: float
    b2: float
    n_total: float = 0.0
    m_harvested: float = 0.0

    def __post_init__(self):
        _check_nonneg(self, ("a1", "a2", "b1", "b2", "n_total", "m_harvested"))
        if self.m_harvested > self.n_total:
            raise InvalidParameterError(
                f"m_harvested ({self.m_harvested}) must not exceed n_total ({self.n_total})"
            )

    @property
    def a3(self) -> float:
        return self.n_total - self.m_harvested

    @property
    def b3(self) -> float:
        return self.n_total - self.m_harvested


@dataclass(frozen=True)
class RawParams:
    """Dimensional coefficients of the Holling type-III model."""

    u: float
    m_cap: float
    k: float
    p: float
    q: float
    effort_E: float
    v: float
    n_cap: float
    e_conv: float
    d: float

    def __post_init__(self):
        _check_nonneg(self, [f.name for f in fields(self)])
        for name in ("m_cap", "n_cap", "p"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be > 0, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class NondimParams:
    """Dimensionless coefficients of the forced model.

    ``delta``, ``q`` and ``effort_E`` are kept apart so harvest effort can be
    varied on its own; only their product enters the dynamics.
    """

    beta: float
    alpha: float
    delta: float
    q: float
    effort_E: float
    sigma: float
    rho: float
    mu: float

    def __post_init__(self):
        _check_nonneg(self, [f.name for f in fields(self)])

    @property
    def harvest(self) -> float:
        """Effective harvest rate ``delta * q * E``."""
        return self.delta * self.q * self.effort_E


@dataclass(frozen=True)
class NoiseSpec:
    """Optional additive stochastic forcing, applied by the integrator.

    ``white`` adds ``intensity * sqrt(h) * xi`` per step. ``colored`` drives an
    Ornstein-Uhlenbeck state per component with correlation time ``tau`` whose
    value is added to the drift.
    """

    kind: str = "none"
    intensity: float = 0.0
    tau: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise InvalidParameterError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        _check_nonneg(self, ("intensity",))
        if self.kind == "colored" and not (self.tau > 0 and math.isfinite(self.tau)):
            raise InvalidParameterError(f"tau must be > 0 for colored noise, got {self.tau!r}")
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise InvalidParameterError(f"seed must be an integer, got {self.seed!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    @property
    def active(self) -> bool:
        return self.kind != "none" and self.intensity > 0


@dataclass(frozen=True)
class Disturbance:
    """Sinusoidal forcing ``A sin(wt)`` on prey and ``Abar sin(wt + phi)`` on predator."""

    amp_prey_A: float = 0.0
    amp_pred_Abar: float = 0.0
    omega: float = 0.0
    phi: float = 0.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        _check_nonneg(self, ("amp_prey_A", "amp_pred_Abar", "omega"))
        if not (math.isfinite(self.phi) and -math.pi < self.phi <= math.pi):
            raise InvalidParameterError(f"phi must lie in (-pi, pi], got {self.phi!r}")


NO_DISTURBANCE = Disturbance()


def lv_classic_rhs(params: ClassicParams, s: State) -> Derivative:
    R, C = s
    _check_finite(r=R, c=C)
    dR = params.a1 * R - params.a2 * R * C - params.a3 * R
    dC = -params.b1 * C + params.b2 * R * C - params.b3 * C
    return Derivative(dR, dC)


def holling(kind: str, k: float, p: float, r: float) -> float:
    """Holling functional response of type ``"I"``, ``"II"`` or ``"III"``.

    Type I is linear up to the cap ``k`` (reached at ``r = p``); type II is
    hyperbolic ``k r / (p + r)``; type III is sigmoidal ``k r^2 / (p + r^2)``.
    """
    if not p > 0:
        raise InvalidParameterError(f"saturation p must be > 0, got {p!r}")
    if k < 0:
        raise InvalidParameterError(f"k must be >= 0, got {k!r}")
    if not r >= 0:
        raise InvalidInputError(f"prey density must be >= 0, got {r!r}")
    if kind == "I":
        return min(k * r / p, k)
    if kind == "II":
        return k * r / (p + r)
    if kind == "III":
        r2 = r * r
        if math.isinf(r2):
            return k
        return k * r2 / (p + r2)
    raise InvalidParameterError(f"unknown Holling type {kind!r}")


def dimensional_rhs(params: RawParams, s: State) -> Derivative:
    r, c = s
    _check_finite(r=r, c=c)
    pr = params
    pred = pr.k * r * r / (pr.p + r * r)
    dr = pr.u * r * (1.0 - r / pr.m_cap) - pred * c - pr.q * pr.effort_E * r
    dc = pr.v * c * (1.0 - c / pr.n_cap) + pr.e_conv * pred * c - pr.d * c
    return Derivative(dr, dc)


def reaction(params: NondimParams, dist: Disturbance, t, r, c):
    """Vectorised forced reaction terms; ``r`` and ``c`` may be floats or arrays."""
    r2 = r * r
    sat = r2 / (1.0 + r2)
    dr = r * (params.beta - r) - params.alpha * sat * c - params.harvest * r
    dc = c * (params.sigma - c) + params.rho * sat * c - params.mu * c
    if dist.amp_prey_A:
        dr = dr + dist.amp_prey_A * np.sin(dist.omega * t)
    if dist.amp_pred_Abar:
        dc = dc + dist.amp_pred_Abar * np.sin(dist.omega * t + dist.phi)
    return dr, dc


def make_field(params: NondimParams, dist: Disturbance):
    """Return a scalar closure ``f(t, r, c) -> (dr, dc)`` without input checks.

    Used in integrator inner loops where per-call validation would dominate.
    """
    beta, alpha, h = params.beta, params.alpha, params.harvest
    sigma, rho, mu = params.sigma, params.rho, params.mu
    A, Ab, w, phi = dist.amp_prey_A, dist.amp_pred_Abar, dist.omega, dist.phi
    sin = math.sin

    def f(t, r, c):
        r2 = r * r
        sat = r2 / (1.0 + r2)
        dr = r * (beta - r) - alpha * sat * c - h * r
        dc = c * (sigma - c) + rho * sat * c - mu * c
        if A:
            dr += A * sin(w * t)
        if Ab:
            dc += Ab * sin(w * t + phi)
        return dr, dc

    return f


def nondim_rhs(params: NondimParams, dist: Disturbance, t: float, s: State) -> Derivative:
    r, c = s
    _check_finite(t=t, r=r, c=c)
    return Derivative(*make_field(params, dist)(t, r, c))
