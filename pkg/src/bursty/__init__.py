"""Bursty transcription distributions via generating-function expansions.

Joint nascent/mature mRNA copy-number distributions for a bursty
production -> splicing -> degradation model, computed three ways that
check one another: closed-form special-function expansions of the log
generating function, direct adaptive quadrature of the same integral,
and stochastic simulation.
"""

from .burst import KINDS, BurstDist, convergence_threshold
from .characteristics import CharArgs, ModelParams
from .errors import (
    AliasingError,
    ConfigError,
    ConvergenceError,
    EventLimitError,
    NumericalError,
    PartitionError,
    SingularityError,
    SupportError,
)
from .integrals import t_infinity
from .inference import (
    Landscape,
    ParamGrid,
    cf_distance,
    empirical_cf,
    kl_divergence,
    ks_error,
    sweep,
)
from .solver import (
    ExpansionSpec,
    GridSpec,
    JointDist,
    expansion_spec_for,
    gf_grid,
    log_gf,
    solve_joint,
    solve_marginals,
    suggest_grid,
)
from .ssa import SampleSet, SsaConfig, endpoint_histogram, simulate

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "BurstDist",
    "CharArgs",
    "ConfigError",
    "ConvergenceError",
    "EventLimitError",
    "ExpansionSpec",
    "GridSpec",
    "JointDist",
    "KINDS",
    "Landscape",
    "ModelParams",
    "NumericalError",
    "ParamGrid",
    "PartitionError",
    "SampleSet",
    "SingularityError",
    "SsaConfig",
    "SupportError",
    "cf_distance",
    "convergence_threshold",
    "empirical_cf",
    "endpoint_histogram",
    "expansion_spec_for",
    "gf_grid",
    "kl_divergence",
    "ks_error",
    "log_gf",
    "simulate",
    "solve_joint",
    "solve_marginals",
    "suggest_grid",
    "sweep",
    "t_infinity",
]
