"""Discrete free-evolution vs. decoherence toolkit for a two-level system."""

from .analysis import (
    Regime,
    RegimeClassification,
    classify_schedule,
    criterion_value,
    intermediate_coefficient,
    limit_pn,
    numeric_limit_probe,
    second_order_pn,
    zeno_sum,
)
from .errors import CapacityError, UnclassifiableScheduleError, ValidationError
from .evolution import (
    SurvivalResult,
    b_word_from_alpha,
    enumerate_branches,
    propagate_projected,
    survival_series,
)
from .physical import (
    BrownianModelParams,
    FreeParticleParams,
    PointerModelParams,
    brownian_schedule,
    free_particle_variance,
    gaussian_model_schedule,
    gaussian_pointer_overlap,
    quadratic_validity_time,
)
from .register import (
    DensityMatrix2,
    QubitRegister,
    apply_cnot,
    partial_trace_to_system,
    recoherence_demo,
)
from .schedules import (
    ConstantOverlap,
    ExplicitOverlaps,
    ExponentialOverlap,
    OverlapSchedule,
    PowerLawOverlap,
    family_eta,
    realize,
)
from .unitary import (
    EvolutionConfig,
    FreeEvolutionUnitary,
    make_general_unitary,
    make_rabi_unitary,
)

__version__ = "0.1.0"
