"""Equilibria of the dimensionless model.

Two kinds of points are produced here. The closed-form *forced
quasi-equilibrium* is the time-dependent balance of the linearised forced
system (quadratic and cross terms dropped); it is not a fixed point of the
full dynamics. Fixed points of the unforced system are located numerically
with multi-start Newton iteration and can be cross-checked against a
brute-force sign-change scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEquilibriumError, InvalidParameterError
from .model import NO_DISTURBANCE, Disturbance, NondimParams, make_field, reaction
from .stability import jacobian

__all__ = [
    "EquilibriumPoint",
    "trivial_equilibrium",
    "forced_quasi_equilibrium",
    "find_autonomous_equilibria",
    "brute_force_equilibria_oracle",
    "group_cells",
    "RESIDUAL_TOL",
]

RESIDUAL_TOL = 1e-10
DEDUP_DIST = 1e-6
MAX_ITER = 50


@dataclass(frozen=True)
class EquilibriumPoint:
    r_e: float
    c_e: float
    kind: str  # trivial | forced-quasi | numeric
    at_time: float | None = None


def trivial_equilibrium() -> EquilibriumPoint:
    return EquilibriumPoint(0.0, 0.0, "trivial")


def forced_quasi_equilibrium(params: NondimParams, dist: Disturbance, t: float) -> EquilibriumPoint:
    """Balance point of the linearised forced system at time ``t``.

    ``R_e = -A sin(wt) / (beta - delta q E)`` and
    ``C_e = -Abar sin(wt + phi) / (sigma - mu)``. Signed values are returned
    as-is, including negative densities.
    """
    prey_den = params.beta - params.harvest
    pred_den = params.sigma - params.mu
    if prey_den == 0.0:
        raise DegenerateEquilibriumError("prey")
    if pred_den == 0.0:
        raise DegenerateEquilibriumError("predator")
    r_e = -dist.amp_prey_A * math.sin(dist.omega * t) / prey_den
    c_e = -dist.amp_pred_Abar * math.sin(dist.omega * t + dist.phi) / pred_den
    return EquilibriumPoint(r_e + 0.0, c_e + 0.0, "forced-quasi", at_time=t)


def _newton(f, params, r, c):
    fr, fc = f(0.0, r, c)
    res = max(abs(fr), abs(fc))
    for _ in range(MAX_ITER):
        if res <= RESIDUAL_TOL:
            # one polishing step toward the floating-point root
            j = jacobian(params, r, c)
            det = j.j11 * j.j22 - j.j12 * j.j21
            if det != 0.0:
                rn = r - (j.j22 * fr - j.j12 * fc) / det
                cn = c - (-j.j21 * fr + j.j11 * fc) / det
                frn, fcn = f(0.0, rn, cn)
                if max(abs(frn), abs(fcn)) <= res:
                    return rn, cn
            return r, c
        j = jacobian(params, r, c)
        det = j.j11 * j.j22 - j.j12 * j.j21
        if det == 0.0 or not math.isfinite(det):
            return None
        dr = (j.j22 * fr - j.j12 * fc) / det
        dc = (-j.j21 * fr + j.j11 * fc) / det
        lam = 1.0
        while True:
            rn, cn = r - lam * dr, c - lam * dc
            frn, fcn = f(0.0, rn, cn)
            resn = max(abs(frn), abs(fcn))
            if resn < res or lam < 1e-4:
                break
            lam *= 0.5
        if not (math.isfinite(rn) and math.isfinite(cn)):
            return None
        r, c, fr, fc, res = rn, cn, frn, fcn, resn
    return (r, c) if res <= RESIDUAL_TOL else None


def find_autonomous_equilibria(
    params: NondimParams,
    search_box: tuple[float, float] = (10.0, 10.0),
    grid_n: int = 32,
) -> list[EquilibriumPoint]:
    """Multi-start Newton search for fixed points of the unforced system.

    Seeds lie on a ``grid_n x grid_n`` lattice over ``[0, r_max] x [0, c_max]``.
    Only roots inside the (closed) box are kept. Seeds that fail to converge
    or meet a singular Jacobian are skipped. The origin is always included.
    """
    r_max, c_max = search_box
    if not (r_max > 0 and c_max > 0):
        raise InvalidParameterError("search box extents must be > 0")
    if grid_n < 8:
        raise InvalidParameterError(f"grid_n must be >= 8, got {grid_n}")
    f = make_field(params, NO_DISTURBANCE)
    slack_r, slack_c = 1e-9 * r_max, 1e-9 * c_max
    roots: list[tuple[float, float]] = [(0.0, 0.0)]
    for r0 in np.linspace(0.0, r_max, grid_n):
        for c0 in np.linspace(0.0, c_max, grid_n):
            out = _newton(f, params, float(r0), float(c0))
            if out is None:
                continue
            r, c = out
            if not (-slack_r <= r <= r_max + slack_r and -slack_c <= c <= c_max + slack_c):
                continue
            if all(math.hypot(r - a, c - b) > DEDUP_DIST for a, b in roots):
                roots.append((r, c))
    roots.sort()
    return [EquilibriumPoint(r + 0.0, c + 0.0, "numeric") for r, c in roots]


def _box(search_box):
    if len(search_box) == 2:
        return 0.0, float(search_box[0]), 0.0, float(search_box[1])
    return tuple(float(x) for x in search_box)


def brute_force_equilibria_oracle(
    params: NondimParams,
    search_box: tuple[float, ...] = (10.0, 10.0),
    grid_n: int = 64,
    threshold: float = 1e-12,
) -> list[tuple[float, float]]:
    """Centres of lattice cells in which both unforced rates vanish.

    A component vanishes in a cell when its corner values straddle zero or
    its smallest corner magnitude is below ``threshold``. A root lying on a
    cell edge flags every adjacent cell; use :func:`group_cells` to merge
    neighbours. ``search_box`` is ``(r_max, c_max)`` or
    ``(r_min, r_max, c_min, c_max)``.
    """
    r_lo, r_hi, c_lo, c_hi = _box(search_box)
    rs = np.linspace(r_lo, r_hi, grid_n + 1)
    cs = np.linspace(c_lo, c_hi, grid_n + 1)
    R, C = np.meshgrid(rs, cs, indexing="ij")
    fr, fc = reaction(params, NO_DISTURBANCE, 0.0, R, C)

    def vanishes(g):
        corners = np.stack([g[:-1, :-1], g[1:, :-1], g[:-1, 1:], g[1:, 1:]])
        lo, hi = corners.min(axis=0), corners.max(axis=0)
        return ((lo <= 0) & (hi >= 0)) | (np.abs(corners).min(axis=0) < threshold)

    flagged = vanishes(fr) & vanishes(fc)
    rc = 0.5 * (rs[:-1] + rs[1:])
    cc = 0.5 * (cs[:-1] + cs[1:])
    return [(float(rc[i]), float(cc[j])) for i, j in zip(*np.nonzero(flagged))]


def group_cells(cells, cell_size: tuple[float, float]) -> list[list[tuple[float, float]]]:
    """Group cell centres into 8-connected clusters on a lattice of ``cell_size``."""
    dr, dc = cell_size
    index = {(round(r / dr - 0.5), round(c / dc - 0.5)): (r, c) for r, c in cells}
    seen: set = set()
    groups = []
    for key in sorted(index):
        if key in seen:
            continue
        seen.add(key)
        stack, members = [key], []
        while stack:
            a, b = stack.pop()
            members.append(index[(a, b)])
            for da in (-1, 0, 1):
                for db in (-1, 0, 1):
                    nb = (a + da, b + db)
                    if nb in index and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
        groups.append(sorted(members))
    return groups
