"""Numerical toolkit for vacuum-conditioned driving of two-mode bosonic
states toward Gaussian fixed points, including the click-conditioned
preparation of seed states from weakly squeezed vacua."""

from .errors import (
    DegenerateProtocolError,
    DegenerateStateError,
    GaussifyError,
    InvalidDensityError,
    NoClickSupportError,
    NoGaussianLimitError,
    NonConvergenceError,
    NotNormalizableError,
    StateFormatError,
)
from .fock import (
    MixedState2,
    PureState2,
    ReducedState1,
    SchmidtDiagonal,
    from_entries,
    norm_sq,
    normalized,
    overlap,
    purity,
    read_state,
    reduce_to_mode,
    trace_norm_distance,
    vacuum,
    von_neumann_entropy,
    write_state,
)
from .optics import (
    BeamSplitter,
    BSMatrix,
    ClickOutcome,
    FourModeState,
    bs_matrix,
    click_project,
    mix_pair,
    mix_pair_and_project_vacuum,
)
from .fixed_point import (
    GammaMatrix,
    SqueezingParams,
    TakagiFactorization,
    gamma_from_state,
    is_normalizable,
    limit_coefficients,
    spectral_norm,
    squeezing_params,
    takagi,
)
from .iterate import (
    IterationReport,
    RunOptions,
    fidelity_to,
    general_step,
    mixed_step,
    run_protocol,
    schmidt_step,
    step_probability,
)
from .procrustean import (
    DistillResult,
    PrepConfig,
    PrepResult,
    best_phase_bell_distance,
    distill_pipeline,
    optimal_t,
    prepare,
    target_bell,
    tmsv,
    tmsv_tail_mass,
)

__version__ = "0.1.0"
