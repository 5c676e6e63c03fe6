"""Balance checking for social choice correspondences.

A correspondence is *balanced* when swapping two adjacent alternatives in
opposite directions for two individuals never changes the choice set.  The
package evaluates the classic correspondences, decides balance and related
information-restriction properties by exhaustive or sampled search over
small profile spaces, builds checkable move sequences between profiles in
restricted regimes, and derives the exact weight constraints that single
out the Borda weights among positional scoring rules at small sizes.
"""

from .prefs import (
    CapExceededError,
    Profile,
    TranspositionPair,
    apply_pair,
    default_labels,
    enumerate_orderings,
    enumerate_profiles,
    format_profile,
    parse_profile,
    profile_count,
    profile_from_index,
    profile_from_rows,
    top_k_set,
    tops_set,
    valid_pairs,
)
from .rules import (
    Rule,
    Weights,
    borda,
    copeland,
    dictatorship,
    evaluate,
    k_approval,
    maximin,
    majority_counts,
    pareto_set,
    parse_rule,
    plurality,
    scoring,
    scoring_scores,
    top_cycle,
    tops_unanimity,
    union_of_tops,
)
from .checker import (
    EffectivenessReport,
    PairWitness,
    Status,
    TwinWitness,
    Verdict,
    check_balanced,
    check_effectiveness,
    check_top_k_only,
    check_tops_only,
    ineffectiveness_witness,
    respects_pareto,
)
from .paths import (
    PathCheck,
    ProfilePath,
    Regime,
    build_top2_path,
    build_tops_path,
    has_spread_top2,
    is_non_unanimous,
    top2_target,
    tops_target,
    validate_path,
)
from .characterization import (
    Characterization,
    InsertionWitness,
    SymbolicScore,
    WeightConstraint,
    balanced_weight_sweep,
    characterize,
    derive_weight_constraints,
    forcing_profile,
    insertion_witness,
    normalize_weights,
    paradox_pad,
    symbolic_scores,
    tied_weights_witness,
)

__version__ = "0.1.0"
