"""Exact principal minors of tree distance matrices, computed four ways."""

from .catalysts import (
    Arrowflow,
    ArrowflowClass,
    Catalyst,
    QuotientFlow,
    catalyst_signed_total,
    catalyst_work_estimate,
    class_signed_sum,
    class_sums,
    classify_arrowflow,
    enumerate_catalysts,
    induced_arrowflow,
    quotient_flow,
    unital_count_for_forest,
    zero_sum_involution,
)
from .errors import (
    BudgetExceeded,
    ClassificationImpossible,
    InvalidSubset,
    NotATree,
    NotQuotientable,
    NotZeroSum,
    SubsetTooSmall,
    TreeMinorError,
    ValueOutOfRange,
    VertexOutOfRange,
    WrongForestClass,
)
from .forests import (
    Forest,
    ForestClass,
    WeightShape,
    boundary_degree,
    classify_forest,
    composite_weight_sum,
    count_s_rooted_dp,
    enumerate_s_rooted,
    enumerate_s_star_rooted,
)
from .identities import (
    DerangementNetwork,
    MarkedWalk,
    PlaneTree,
    bead_bijection_witness,
    binomial_identity_check,
    check_interlacing,
    derangement_network_paths,
    marked_dfs,
    signed_derangement_sum,
)
from .linalg import det_exact, permutation_sign
from .minors import (
    MinorReport,
    cross_verify,
    minor_ck_corollary,
    minor_determinant,
    minor_richman,
    minor_theorem_a,
)
from .tree import (
    Tree,
    distance_matrix,
    from_edge_list,
    from_prufer,
    induces_subtree,
    principal_submatrix,
    random_tree,
    to_prufer,
)

__version__ = "0.1.0"

__all__ = [
    "Arrowflow",
    "ArrowflowClass",
    "BudgetExceeded",
    "Catalyst",
    "ClassificationImpossible",
    "DerangementNetwork",
    "Forest",
    "ForestClass",
    "InvalidSubset",
    "MarkedWalk",
    "MinorReport",
    "NotATree",
    "NotQuotientable",
    "NotZeroSum",
    "PlaneTree",
    "QuotientFlow",
    "SubsetTooSmall",
    "Tree",
    "TreeMinorError",
    "ValueOutOfRange",
    "VertexOutOfRange",
    "WeightShape",
    "WrongForestClass",
    "bead_bijection_witness",
    "binomial_identity_check",
    "boundary_degree",
    "catalyst_signed_total",
    "catalyst_work_estimate",
    "check_interlacing",
    "class_signed_sum",
    "class_sums",
    "classify_arrowflow",
    "classify_forest",
    "composite_weight_sum",
    "count_s_rooted_dp",
    "cross_verify",
    "derangement_network_paths",
    "distance_matrix",
    "enumerate_catalysts",
    "enumerate_s_rooted",
    "enumerate_s_star_rooted",
    "from_edge_list",
    "from_prufer",
    "induced_arrowflow",
    "induces_subtree",
    "marked_dfs",
    "minor_ck_corollary",
    "minor_determinant",
    "minor_richman",
    "minor_theorem_a",
    "principal_submatrix",
    "quotient_flow",
    "random_tree",
    "signed_derangement_sum",
    "to_prufer",
    "unital_count_for_forest",
    "zero_sum_involution",
]
