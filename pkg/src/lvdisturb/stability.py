"""Linear stability of the autonomous dimensionless system."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InvalidInputError
from .model import NondimParams

__all__ = [
    "Jacobian2",
    "StabilityReport",
    "jacobian",
    "eigen2",
    "classify_equilibrium",
    "printed_lambdas",
    "CLASSES",
]

CLASSES = (
    "stable-node",
    "unstable-node",
    "saddle",
    "stable-focus",
    "unstable-focus",
    "center",
    "degenerate",
)

REL_TOL = 1e-9


@dataclass(frozen=True)
class Jacobian2:
    j11: float
    j12: float
    j21: float
    j22: float

    def __post_init__(self):
        for name in ("j11", "j12", "j21", "j22"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"Jacobian entry {name} is not finite")

    def as_rows(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.j11, self.j12), (self.j21, self.j22))

    @property
    def magnitude(self) -> float:
        return max(abs(self.j11), abs(self.j12), abs(self.j21), abs(self.j22))


@dataclass(frozen=True)
class StabilityReport:
    """Eigenvalues and trace/determinant classification of a 2x2 Jacobian.

    ``printed_lambda`` optionally carries the two product expressions printed
    for the forced equilibrium. They are diagnostics only and are not
    eigenvalues of ``jacobian`` in general.
    """

    eigenvalues: tuple[complex, complex]
    trace: float
    determinant: float
    discriminant: float
    cls: str
    jacobian: Jacobian2 | None = None
    printed_lambda: tuple[float, float] | None = None

    @property
    def is_stable(self) -> bool:
        return self.cls in ("stable-node", "stable-focus")


def jacobian(params: NondimParams, r: float, c: float) -> Jacobian2:
    """Analytic Jacobian of the unforced reaction terms at ``(r, c)``."""
    if not (math.isfinite(r) and math.isfinite(c)):
        raise InvalidInputError(f"state must be finite, got ({r!r}, {c!r})")
    r2 = r * r
    den = 1.0 + r2
    dsat = 2.0 * r / (den * den)  # d/dr of r^2/(1+r^2)
    sat = r2 / den
    j11 = params.beta - 2.0 * r - params.alpha * dsat * c - params.harvest
    j12 = -params.alpha * sat
    j21 = params.rho * dsat * c
    j22 = params.sigma - 2.0 * c + params.rho * sat - params.mu
    # + 0.0 normalises signed zeros
    return Jacobian2(j11 + 0.0, j12 + 0.0, j21 + 0.0, j22 + 0.0)


def _classify(T: float, D: float, disc: float, scale: float) -> str:
    tol1 = REL_TOL * scale
    tol2 = REL_TOL * scale * scale
    if D < -tol2:
        return "saddle"
    if D > tol2:
        if abs(T) <= tol1:
            return "center"
        if disc < -tol2:
            return "stable-focus" if T < 0 else "unstable-focus"
        return "stable-node" if T < 0 else "unstable-node"
    return "degenerate"


def _eigenvalues(j: Jacobian2, T: float, D: float, disc: float) -> tuple[complex, complex]:
    if j.j12 == 0.0 or j.j21 == 0.0:
        # triangular: the spectrum is the diagonal, exactly
        lams = [complex(j.j11), complex(j.j22)]
    elif disc >= 0.0:
        s = math.sqrt(disc)
        big = 0.5 * (T + math.copysign(s, T))
        small = D / big if big != 0.0 else 0.5 * (T - math.copysign(s, T))
        lams = [complex(big), complex(small)]
    else:
        s = cmath.sqrt(disc)
        lams = [0.5 * (T + s), 0.5 * (T - s)]
    lams.sort(key=lambda z: (z.real, z.imag), reverse=True)
    return lams[0], lams[1]


def eigen2(j: Jacobian2) -> StabilityReport:
    T = j.j11 + j.j22
    D = j.j11 * j.j22 - j.j12 * j.j21
    disc = T * T - 4.0 * D
    lams = _eigenvalues(j, T, D, disc)
    return StabilityReport(
        eigenvalues=lams,
        trace=T,
        determinant=D,
        discriminant=disc,
        cls=_classify(T, D, disc, j.magnitude),
        jacobian=j,
    )


def printed_lambdas(params: NondimParams, r: float, c: float) -> tuple[float, float]:
    """The two product expressions printed as eigenvalues at the forced equilibrium.

    With ``a = r/(1+r^2)``, ``b = r^2/(1+r^2)``, ``P = -r`` and ``K = -c``::

        lam1 = (beta + 2P + 2 alpha K (a - b P)) * (sigma + 2K + rho b - mu)
        lam2 = -2 alpha b K (a + b P)

    Reproduced literally: the harvest term does not appear in ``lam1``.
    """
    a = r / (1.0 + r * r)
    b = r * r / (1.0 + r * r)
    P, K = -r, -c
    lam1 = (params.beta + 2 * P + 2 * params.alpha * K * (a - b * P)) * (
        params.sigma + 2 * K + params.rho * b - params.mu
    )
    lam2 = -2 * params.alpha * b * K * (a + b * P)
    return lam1, lam2


def classify_equilibrium(params: NondimParams, point) -> StabilityReport:
    """Classify an :class:`~lvdisturb.equilibria.EquilibriumPoint`.

    Forced quasi-equilibria are linearised with the autonomous Jacobian at the
    point's coordinates.
    """
    j = jacobian(params, point.r_e, point.c_e)
    rep = eigen2(j)
    return StabilityReport(
        eigenvalues=rep.eigenvalues,
        trace=rep.trace,
        determinant=rep.determinant,
        discriminant=rep.discriminant,
        cls=rep.cls,
        jacobian=j,
        printed_lambda=printed_lambdas(params, point.r_e, point.c_e),
    )
