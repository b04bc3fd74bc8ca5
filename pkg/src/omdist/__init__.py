"""Order-of-magnitude distance reasoning: solvers, cluster trees, and a first-order decider."""

from .cluster_tree import (
    TreeNode,
    check_instantiation,
    clusters_of,
    instantiate,
    instantiate_euclidean,
    instantiate_ordered,
    lca_label,
    leaf,
    node,
    tree_satisfies,
    validate,
)
from .constraints import (
    ConstraintSet,
    Edge,
    OrderConstraint,
    StrictConstraint,
    WeakConstraint,
    before,
    closer,
    leq,
)
from .fo_decide import decide, decide_sentence, extending_labels, extensions, normalize
from .inference import entails, entails_order, equivalent, negate
from .omspace import ZERO, Om, OmPoint, od, om_cmp, points_at_scale
from .parsing import ParseError, parse_constraints, parse_formula
from .solver import (
    incorporate_order,
    num_labels,
    reduce_constraints,
    solve,
    solve_fast,
    solve_mixed,
    solve_ordered,
    solve_weak,
)

__all__ = [
    "TreeNode",
    "check_instantiation",
    "clusters_of",
    "instantiate",
    "instantiate_euclidean",
    "instantiate_ordered",
    "lca_label",
    "leaf",
    "node",
    "tree_satisfies",
    "validate",
    "ConstraintSet",
    "Edge",
    "OrderConstraint",
    "StrictConstraint",
    "WeakConstraint",
    "before",
    "closer",
    "leq",
    "decide",
    "decide_sentence",
    "extending_labels",
    "extensions",
    "normalize",
    "entails",
    "entails_order",
    "equivalent",
    "negate",
    "ZERO",
    "Om",
    "OmPoint",
    "od",
    "om_cmp",
    "points_at_scale",
    "ParseError",
    "parse_constraints",
    "parse_formula",
    "incorporate_order",
    "num_labels",
    "reduce_constraints",
    "solve",
    "solve_fast",
    "solve_mixed",
    "solve_ordered",
    "solve_weak",
]

__version__ = "0.1.0"
