"""Self-guided quantum process tomography for single-qubit unitaries.

SPSA learning of an unknown SU(2) element from finite-shot Bell-measurement
fidelities, a standard process-tomography baseline, and ensemble tooling.
"""

from .errors import (
    BudgetError,
    ConfigError,
    DecompositionError,
    FitDomainError,
    IllConditionedError,
    InvalidInputError,
    InvalidParameterError,
    ReconstructionError,
    SGQPTError,
)
from .harness import (
    PRESETS,
    EnsembleResult,
    EnsembleStats,
    ExperimentConfig,
    PowerLawFit,
    emit_plot,
    export_results,
    fit_power_law,
    load_stats,
    run_ensemble,
)
from .measurement import IDEAL, NoiseModel, measure_overlap, realize_control
from .qpt import (
    TomogramData,
    channel_fidelity,
    qpt_trial,
    reconstruct_process_mle,
    reconstruct_unitary,
    simulate_qpt_counts,
)
from .spsa import (
    DEFAULT_INIT,
    GainSchedule,
    LearnerState,
    TrialTrace,
    gains_at,
    run_learning,
    sample_direction,
    spsa_iteration,
)
from .su2 import (
    SU2Params,
    WaveplateTriple,
    bloch_rotation,
    decompose_to_waveplates,
    haar_random_su2,
    hwp_matrix,
    infidelity,
    nearest_rotation,
    phase_distance,
    process_fidelity,
    qwp_matrix,
    so3_to_su2,
    su2_from_params,
    waveplate_compose,
)

__version__ = "0.1.0"
