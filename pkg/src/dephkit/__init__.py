"""Dephasing noise on quantum gates modeled as Gram-matrix superchannels."""

from .bloch import (
    AffineMap,
    affine_from_channel,
    affine_from_jamiolkowski,
    affine_map,
    gram_action_on_affine,
    jamiolkowski_from_affine,
    project_to_xy,
    xy_plane_projection,
)
from .channels import (
    Channel,
    GramMatrix,
    apply_channel,
    channel_from_jamiolkowski,
    channel_from_kraus,
    classical_action,
    coherence_generating_power,
    compose,
    density_matrix,
    dephase_state,
    dephasing_channel,
    gram_matrix,
    identity_channel,
    is_mio,
    jamiolkowski,
    l1_coherence,
    max_dephase,
    max_entangled_state,
    maximally_dephasing_channel,
    random_channel,
    random_density_matrix,
    superop_from_kraus,
    transition_matrix,
    unitary_channel,
)
from .errors import (
    DecompositionError,
    DephkitError,
    DimensionError,
    NotDephasingRealizationError,
    ValidationError,
)
from .linalg import (
    DEFAULT_TOL,
    is_psd,
    kron,
    min_eig_hermitian,
    partial_trace,
    partial_transpose,
    reshuffle,
    schur,
)
from .memory import (
    ProductDecomposition,
    ProductTerm,
    decompose_product_qubit,
    family_gram,
    family_ppt_closed_form,
    family_realization,
    is_passive_compatible,
    l1_distance,
    memory_activity_qubit,
    nearest_passive_qubit,
    nmr_experimental_gram,
    ppt_min_eig,
)
from .superchannels import (
    BipartiteChannel,
    ControlledUnitaryFamily,
    RealizationReport,
    SimulationConsistencyReport,
    SuperGram,
    apply_bipartite,
    apply_super,
    bipartite_channel,
    circuit_oracle,
    controlled_unitary_channel,
    controlled_unitary_family,
    gram_from_controlled_unitaries,
    gram_from_simulation,
    identity_bipartite,
    identity_super_gram,
    marginal_grams,
    random_controlled_family,
    random_super_gram,
    validate_super_gram,
    verify_dephasing_realization,
    verify_simulation_consistency,
)

__version__ = "0.1.0"
