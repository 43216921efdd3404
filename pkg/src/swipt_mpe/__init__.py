"""Safety and coverage probabilities of large-scale SWIPT networks under RF-exposure limits.

The :mod:`~swipt_mpe.analytic` module evaluates the closed-form
probabilities through Gil-Pelaez inversion of the interference
characteristic function; :mod:`~swipt_mpe.montecarlo` provides the
simulation ground truth; :mod:`~swipt_mpe.sweep` and :mod:`~swipt_mpe.cli`
turn both into CSV and JSON files.
"""

__version__ = "0.1.0"

from .analytic import (
    METRICS,
    CoverageThresholds,
    coverage_metrics,
    energy_coverage,
    info_coverage,
    interference_cf,
    joint_coverage,
    joint_with_mpe,
    mpe_prob,
    mpe_prob_asymptotic,
    no_interference_joint,
    optimal_power,
    psi,
)
from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    IoError,
    ParseError,
    PoleError,
    RangeError,
    SaturationError,
    SwiptError,
)
from .model import (
    AntennaPattern,
    GainClass,
    NetworkParams,
    Realization,
    RectennaModel,
    gain_pmf,
    harvest_threshold,
    harvested_energy,
    interference,
    mpe_of,
    received_power,
    sinr_of,
)
from .montecarlo import (
    McSettings,
    ProbabilityEstimate,
    TrialStats,
    empirical_cf,
    estimate,
    exact_joint_with_mpe,
    sample_realization,
)
from .quadrature import DEFAULT_OPTIONS, QuadratureOptions, gil_pelaez_cdf
from .scenarios import DEFAULT_THRESHOLDS, Scenario, SweepSpec, load_config, preset
from .special_fn import beta_ext, cpow_principal, gamma_c, upper_gamma_int
