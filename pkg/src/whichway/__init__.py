"""Two-path interferometer simulation with a marker spin labeling the paths.

Compiles NMR-style pulse programs, evolves the exact two-spin state,
emulates the population measurement procedure, and checks the duality
between fringe visibility and which-way distinguishability,
D^2 + V^2 = 1, across the partial-information regime.
"""
from .analysis import (
    DecompositionCoeffs,
    DualityRecord,
    JointProbs,
    beta_basis,
    decompose,
    distinguishability_geometric,
    distinguishability_likelihood,
    duality_sum,
    entanglement,
    likelihood,
    optimal_observable_search,
    visibility_analytic,
    visibility_from_fringe,
)
from .cli import SweepConfig, load_records, run_fringe, run_sweep
from .interferometer import MarkerPair, PhaseSetting, population, psi1, psi2, u2
from .measurement import (
    MeasurementRecord,
    NoiseModel,
    dephase,
    joint_probabilities,
    marker_rotation,
    read_diagonal,
    simulate_fringe,
    subseed,
    t2_dephasing_weight,
)
from .pulses import (
    DEFAULT_FRAME,
    PHASE_MERGE_PROGRAM,
    SPLIT_MARK_PROGRAM,
    FrameConvention,
    Pulse,
    PulseError,
    PulseSequence,
    PulseSyntaxError,
    UnboundParameterError,
    compile_sequence,
    equivalent_up_to_phase,
    evaluate_angle,
    parse,
    u2_pulse_params,
)
from .quantum import (
    Basis2,
    apply,
    density_matrix,
    partial_trace,
    phase_aligned_fidelity,
    tensor,
    von_neumann_entropy,
)

__version__ = "0.1.0"
