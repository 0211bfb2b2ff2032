"""Pseudospectral laboratory for weakly dissipative shallow-water equations.

Implements the two-component b-family (Camassa-Holm, Degasperis-Procesi,
Hunter-Saxton, and mu-variants), the Novikov equation, and the exponential
time-rescaling that maps non-dissipative solutions onto weakly dissipative
ones, together with experiments that certify the correspondence numerically.
"""

__version__ = "0.1.0"

from .equations import (
    BFAMILY,
    CH_WEAK,
    NOVIKOV,
    EquationSpec,
    MKind,
    TwoComponentState,
    momentum_of,
    recover_velocity,
    rhs_bfamily,
    rhs_ch_weakform,
    rhs_novikov,
    velocity_of_state,
)
from .errors import (
    Breakdown,
    ConfigError,
    IncompatibleMean,
    NoBlowUpObserved,
    NonMonotoneFlow,
    OutOfRange,
    WdlabError,
)
from .config import RunConfig, parse_config
from .grid import PeriodicGrid
from .hs_exact import HSExactData
from .timestepping import IntegratorConfig, Trajectory, integrate, integrate_to_times
from .transform import TimeMapParams, existence_time, map_solution, tau, tau_inverse
from .verify import (
    BlowupReport,
    ConvergenceReport,
    DualFormulationReport,
    EquivalenceReport,
    OracleReport,
    blowup_correspondence_experiment,
    convergence_study,
    dual_formulation_check,
    equivalence_experiment,
    hs_oracle_experiment,
    initial_state,
    measure_breaking_time,
)
