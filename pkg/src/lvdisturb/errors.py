"""Exception hierarchy.

Every error raised by the library derives from :class:`LVError`. The CLI maps
:class:`ConfigError` (and its subclasses) to exit code 1 and
:class:`NumericalError` to exit code 2.
"""


class LVError(Exception):
    """Base class for all library errors."""


class InvalidInputError(LVError, ValueError):
    """A state, time or array argument is not finite or malformed."""


class InvalidParameterError(LVError, ValueError):
    """A model parameter violates its documented constraint."""


class SingularScalingError(InvalidParameterError):
    """Nondimensional scaling requires u, v and p to be strictly positive."""


class InsufficientDataError(LVError, ValueError):
    """A series or window holds too few samples for the requested analysis."""


class ConfigError(LVError, ValueError):
    """Configuration could not be parsed or failed validation."""

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class DataFormatError(ConfigError):
    """A data file (trajectory CSV) is malformed."""


class NumericalError(LVError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class StiffnessError(NumericalError):
    """Adaptive step size fell below the underflow threshold."""

    def __init__(self, t: float, h: float):
        self.t = t
        self.h = h
        super().__init__(f"step size underflow (h={h:.3e}) at t={t:.17g}")


class CFLError(NumericalError):
    """Explicit diffusion step exceeds the stability bound."""

    def __init__(self, dt: float, dt_max: float):
        self.dt = dt
        self.dt_max = dt_max
        super().__init__(f"dt={dt:.6g} violates the CFL bound; maximal admissible dt is {dt_max:.17g}")


class DegenerateEquilibriumError(NumericalError):
    """The quasi-equilibrium denominator vanishes."""

    def __init__(self, which: str):
        self.which = which
        if which == "prey":
            msg = "prey-degenerate: beta equals delta*q*E"
        else:
            msg = "predator-degenerate: sigma equals mu"
        super().__init__(msg)
