"""Collective decay of qubit chains coupled to a one-dimensional waveguide."""

from .model import (
    ChainConfig,
    ExcitationBasis,
    HeffBlock,
    InteractionMatrices,
    fock_state,
    heff_block,
    interaction_matrices,
    interaction_matrices_from_phases,
)
from .spectra import (
    EigenMode,
    PolaritonConfig,
    dominant_wavevector,
    infinite_chain_shift,
    polariton_bands,
    single_excitation_modes,
    subradiant_scaling_fit,
)
from .multiexc import (
    FermionicAnsatz,
    MultiExcMode,
    ansatz_fidelity,
    best_constituents,
    decay_additivity,
    fermionic_ansatz,
    infidelity_scaling,
    momentum_pair_label,
    multi_excitation_modes,
)
from .dynamics import (
    BlockDensityMatrix,
    EvolutionRecord,
    conditional_fidelity,
    evolve,
    fock_blocks,
    imperfection_sweep,
    lindblad_rhs,
    pure_state_blocks,
)
from .preparation import (
    CavityConfig,
    PreparedState,
    optimize_transfer_time,
    phase_adjust_and_retune,
    pi_pulse,
    prepare_fock,
)
from .correlations import (
    CollectiveLoweringOp,
    CorrelationRecord,
    collective_lowering,
    conditional_state,
    intensity,
    predicted_t2_maxima,
    t2_maxima,
    t2_surface,
)
from .fitting import loglog_fit

__version__ = "0.1.0"
