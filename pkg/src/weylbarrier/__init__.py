"""Chiral (Weyl) fermion scattering off steps and square barriers."""

from .errors import DivergentSeriesError, DomainError, RegimeError, ResolutionError, SingularityError, WeylError
from .kinematics import Kinematics, Regime, barrier_momentum, classify_regime, longitudinal_momentum, spinor
from .steps import AlphaFactor, StepKind, StepResult, alpha_factor, step1, step2, step3, step_reflection_probability
from .barrier import (
    BarrierConfig,
    BarrierResult,
    KleinReport,
    Method,
    SeriesExpansion,
    closed_form,
    find_resonances,
    incoherent_probabilities,
    klein_report,
    loop_factor,
    matrix_solve,
    series_expand,
)

__version__ = "0.1.0"
