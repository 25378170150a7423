"""Forced Lotka-Volterra predator-prey model with harvesting.

Holling type-III predation, human harvesting, sinusoidal forcing, optional
stochastic noise and 2D diffusion, with equilibrium and linear stability
analysis and oscillation diagnostics.
"""

__version__ = "0.1.0"

from .errors import (
    CFLError,
    ConfigError,
    DegenerateEquilibriumError,
    InsufficientDataError,
    InvalidInputError,
    InvalidParameterError,
    LVError,
    NumericalError,
    SingularScalingError,
    StiffnessError,
)
from .model import (
    ClassicParams,
    Disturbance,
    NoiseSpec,
    NondimParams,
    RawParams,
    State,
    dimensional_rhs,
    holling,
    lv_classic_rhs,
    nondim_rhs,
)
from .nondim import ScaleRecord, from_nondim, to_nondim
from .stability import Jacobian2, StabilityReport, classify_equilibrium, eigen2, jacobian
from .equilibria import (
    EquilibriumPoint,
    brute_force_equilibria_oracle,
    find_autonomous_equilibria,
    forced_quasi_equilibrium,
    trivial_equilibrium,
)
from .integrators import IntegrationSpec, Trajectory, convergence_order, integrate
from .spatial import Field, GridSpec, laplacian, run_pde, step_pde
from .analysis import OscillationReport, dominant_period, oscillation_report, phase_lag, windowed_stats
from .io import RunConfig, load_config, read_trajectory_csv, write_trajectory_csv
from .plot import plot_svg
