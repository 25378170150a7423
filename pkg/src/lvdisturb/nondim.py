"""Mapping between dimensional and dimensionless parameters.

The mapping uses the closed-form definitions

    beta  = m / sqrt(p)            sigma = n / sqrt(p)
    alpha = k m / (u sqrt(p))      rho   = e n k / (v sqrt(p))
    delta = m / (u sqrt(p))        mu    = d n / (v sqrt(p))

as given, without re-deriving them. The prey and predator use different time
scales, so no single rescaling of the coupled system produces exactly these
coefficients; treat :class:`~lvdisturb.model.NondimParams` as the primary
parameterisation and this module as a convenience.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import SingularScalingError
from .model import NondimParams, RawParams

__all__ = ["ScaleRecord", "to_nondim", "from_nondim"]


@dataclass(frozen=True)
class ScaleRecord:
    sqrt_p: float
    time_scale_prey: float
    time_scale_pred: float


def to_nondim(raw: RawParams) -> tuple[NondimParams, ScaleRecord]:
    if raw.u <= 0 or raw.v <= 0 or raw.p <= 0:
        raise SingularScalingError(f"u, v and p must be > 0 (u={raw.u}, v={raw.v}, p={raw.p})")
    sp = math.sqrt(raw.p)
    prey_scale = raw.u * sp
    pred_scale = raw.v * sp
    nd = NondimParams(
        beta=raw.m_cap / sp,
        alpha=raw.k * raw.m_cap / prey_scale,
        delta=raw.m_cap / prey_scale,
        q=raw.q,
        effort_E=raw.effort_E,
        sigma=raw.n_cap / sp,
        rho=raw.e_conv * raw.n_cap * raw.k / pred_scale,
        mu=raw.d * raw.n_cap / pred_scale,
    )
    scales = ScaleRecord(sqrt_p=sp, time_scale_prey=raw.m_cap / prey_scale, time_scale_pred=raw.n_cap / pred_scale)
    return nd, scales


def from_nondim(nd: NondimParams, scales: ScaleRecord, anchors: Mapping[str, float]) -> RawParams:
    """Invert :func:`to_nondim` given the anchors ``u``, ``v`` and ``p``.

    ``delta`` is redundant (it equals ``beta / u``) and is not used. When
    ``k == 0`` the conversion rate cannot be recovered and is returned as 0.
    """
    try:
        u, v, p = float(anchors["u"]), float(anchors["v"]), float(anchors["p"])
    except KeyError as exc:
        raise SingularScalingError(f"missing anchor {exc.args[0]!r}") from None
    if u <= 0 or v <= 0 or p <= 0:
        raise SingularScalingError(f"anchors must be > 0 (u={u}, v={v}, p={p})")
    sp = scales.sqrt_p if scales is not None else math.sqrt(p)
    if not math.isclose(sp * sp, p, rel_tol=1e-9):
        raise SingularScalingError(f"scale record sqrt_p={sp} is inconsistent with anchor p={p}")
    m_cap = nd.beta * sp
    n_cap = nd.sigma * sp
    if m_cap <= 0 or n_cap <= 0:
        raise SingularScalingError("beta and sigma must be > 0 to recover carrying capacities")
    k = nd.alpha * u * sp / m_cap
    e_conv = nd.rho * v * sp / (n_cap * k) if k > 0 else 0.0
    d = nd.mu * v * sp / n_cap
    return RawParams(
        u=u, m_cap=m_cap, k=k, p=p, q=nd.q, effort_E=nd.effort_E,
        v=v, n_cap=n_cap, e_conv=e_conv, d=d,
    )
