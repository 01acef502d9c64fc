"""gapforge: a finite-scale laboratory for almost-inclusion gap diagrams,
two forcing-style posets, generic-filter simulation, and chain-condition
experiments."""

from .errors import (
    AgreementFailure,
    GapforgeError,
    HeightMismatch,
    HypothesisFailure,
    IndexMismatch,
    InvalidBit,
    InvariantViolation,
    NotAChain,
    RequirementFailure,
    SearchTooLarge,
    TableTooShort,
    UnknownDelta,
    UnknownIndex,
)
from .gaps import (
    CHWitness,
    GapFragment,
    almost_subset,
    c_hausdorff_check,
    excess,
    excess_matrix_csv,
    full_inclusion_union,
    s_hausdorff_profile,
    special_gap_check,
    uniform_interpolation,
)
from .ordinals import (
    EQ,
    GT,
    LT,
    OMEGA,
    Index,
    Ladder,
    Ordinal,
    SPartition,
    cmp_index,
    cmp_ordinal,
    fin,
    index_sort_key,
)
from .pcc import (
    CompatMatrix,
    PccInstance,
    build_compat_matrix,
    find_compatible_pair,
    generate_pcc_instance,
    max_order_rectangle,
    pcc_ab_profiles,
    verify_rectangle,
)
from .poset_p import (
    PCondition,
    bits,
    delta_system_refine,
    p_compatible_oracle,
    p_extend,
    p_join,
    p_join_from_core,
    p_leq,
    p_restrict,
    p_union_agreeing,
    word_from_bits,
)
from .poset_q import (
    QCondition,
    QContext,
    extract_w,
    q_compatible,
    q_leq,
    q_restrict,
    separated_pair_check,
)
from .simulate import (
    DenseRequirement,
    PParams,
    Poset,
    QParams,
    SimRun,
    build_filter,
    check_tower_coherence,
    convergent_inclusion_scan,
    default_index_blocks,
    default_partition,
    extract_gap_fragment,
    p_poset,
    p_standard_schedule,
    pipeline,
    q_poset,
    q_standard_schedule,
)

__version__ = "0.1.0"
