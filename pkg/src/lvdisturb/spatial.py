"""Two-dimensional reaction-diffusion integration (explicit FTCS).

Grids are cell-centred with zero-flux (Neumann) boundaries: each ghost cell
copies its interior neighbour, so pure diffusion conserves total mass.
Sinusoidal forcing is applied uniformly over space. Stochastic noise is not
supported here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CFLError, InvalidInputError, InvalidParameterError
from .model import Disturbance, NondimParams, reaction

__all__ = ["GridSpec", "Field", "laplacian", "cfl_limit", "step_pde", "run_pde", "CFL_SAFETY"]

CFL_SAFETY = 0.9


@dataclass(frozen=True)
class GridSpec:
    nx: int = 64
    ny: int = 64
    h: float = 1.0
    d1: float = 0.1
    d2: float = 0.1
    boundary: str = "neumann"

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise InvalidParameterError(f"grid must be at least 3x3, got {self.nx}x{self.ny}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise InvalidParameterError(f"h must be > 0, got {self.h}")
        if not (self.d1 >= 0 and self.d2 >= 0):
            raise InvalidParameterError(f"diffusion coefficients must be >= 0, got {self.d1}, {self.d2}")
        if self.boundary != "neumann":
            raise InvalidParameterError(f"only 'neumann' boundaries are supported, got {self.boundary!r}")


@dataclass(frozen=True)
class Field:
    """Prey and predator grids of shape ``(nx, ny)`` at ``time``."""

    r: np.ndarray
    c: np.ndarray
    time: float = 0.0

    @classmethod
    def uniform(cls, gs: GridSpec, r: float, c: float, time: float = 0.0) -> "Field":
        return cls(np.full((gs.nx, gs.ny), float(r)), np.full((gs.nx, gs.ny), float(c)), time)


def laplacian(grid: np.ndarray, h: float) -> np.ndarray:
    """Five-point Laplacian with zero-flux boundaries."""
    g = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(g)):
        raise InvalidInputError("grid contains non-finite values")
    p = np.pad(g, 1, mode="edge")
    return (p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * g) / (h * h)


def cfl_limit(gs: GridSpec) -> float:
    """Largest admissible step, ``0.9 h^2 / (4 max(d1, d2))`` (inf without diffusion)."""
    dmax = max(gs.d1, gs.d2)
    if dmax == 0:
        return math.inf
    return CFL_SAFETY * gs.h * gs.h / (4.0 * dmax)


def step_pde(
    params: NondimParams,
    dist: Disturbance,
    gs: GridSpec,
    f: Field,
    dt: float,
    *,
    reacting: bool = True,
    clamp: bool = True,
) -> Field:
    """One forward-Euler step. ``reacting=False`` gives pure diffusion."""
    limit = cfl_limit(gs)
    if not (dt > 0) or dt > limit:
        raise CFLError(dt, limit)
    r, c = f.r, f.c
    dr = gs.d1 * laplacian(r, gs.h) if gs.d1 else np.zeros_like(r)
    dc = gs.d2 * laplacian(c, gs.h) if gs.d2 else np.zeros_like(c)
    if reacting:
        rr, rc = reaction(params, dist, f.time, r, c)
        dr = dr + rr
        dc = dc + rc
    r_new = r + dt * dr
    c_new = c + dt * dc
    if clamp:
        np.maximum(r_new, 0.0, out=r_new)
        np.maximum(c_new, 0.0, out=c_new)
    return Field(r_new, c_new, f.time + dt)


def run_pde(
    params: NondimParams,
    dist: Disturbance,
    gs: GridSpec,
    initial: Field,
    t1: float,
    dt: float,
    snapshot_every: float,
    *,
    reacting: bool = True,
    clamp: bool = True,
) -> list[Field]:
    """Advance to ``t1`` and return snapshots, the initial field first.

    Steps sit at ``t0 + i*dt`` with the last one shortened to land on ``t1``.
    A snapshot is taken every ``floor(snapshot_every/dt)`` steps and at ``t1``.
    """
    if snapshot_every < dt:
        raise InvalidParameterError(f"snapshot_every ({snapshot_every}) must be >= dt ({dt})")
    limit = cfl_limit(gs)
    if not (dt > 0) or dt > limit:
        raise CFLError(dt, limit)
    t0 = initial.time
    if not t1 > t0:
        raise InvalidParameterError(f"t1 ({t1}) must exceed the initial time ({t0})")
    n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    stride = max(1, math.floor(snapshot_every / dt + 1e-9))
    f = initial
    snaps = [initial]
    for i in range(n):
        t_next = t1 if i == n - 1 else t0 + (i + 1) * dt
        f = step_pde(params, dist, gs, f, t_next - f.time, reacting=reacting, clamp=clamp)
        f = Field(f.r, f.c, t_next)
        if (i + 1) % stride == 0 or i == n - 1:
            snaps.append(f)
    return snaps
