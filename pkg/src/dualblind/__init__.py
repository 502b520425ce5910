"""Dual-blind deconvolution of overlaid radar and communications signals.

Recovery runs through a concatenated vectorized-Hankel lift and nuclear-norm
minimization, followed by MUSIC delay estimation and least-squares waveform
fits.  :mod:`dualblind.extremal` holds the Beurling-Selberg functions and the
separation-based conditioning bound.
"""

from .baseline import solve_baseline
from .config import ExperimentConfig, load_config, parse_config
from .estimators import DualBlindDeconvolution
from .exceptions import (
    ConfigError,
    DegenerateSceneError,
    DomainError,
    EstimationError,
    InfeasibleBoundError,
    InfeasibleSeparationError,
    RankDeficiencyError,
    ShapeError,
    UnsupportedConfigurationError,
)
from .extremal import (
    ExtremalInterval,
    SeparationStats,
    beurling_majorant_sgn,
    condition_bound,
    empirical_condition,
    min_separation,
    selberg_integral,
    selberg_majorant,
    selberg_minorant,
)
from .hankel import (
    HankelShape,
    MeasurementOperator,
    check_guarantee,
    concat_lift,
    concat_lift_adjoint,
    hankel_lift,
    hankel_lift_adjoint,
    measurement_op,
    measurement_op_adjoint,
    vandermonde_factors,
)
from .signal_model import (
    DelayChannel,
    LiftedMatrix,
    Scene,
    build_lifted_truth,
    random_scene,
    steering_vector,
    synthesize_measurements,
)
from .solver import SolverParams, SolverReport, nuclear_norm, solve_dbd, svt
from .spectral import Pseudospectrum, music_delays, nmse, recover_waveform_amplitudes

__version__ = "0.1.0"
