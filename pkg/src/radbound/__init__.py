"""Norm-based Rademacher complexity bounds for ReLU feedforward networks.

The library computes the depth-insensitive layer-peeling bounds driven by
per-layer Frobenius/operator norm budgets, finds cost-minimizing layer
subsequences, and validates the bounds against direct empirical estimation
of the Rademacher complexity at desk scale.
"""

from .bounds import BoundReport, NormProfile, baseline_bound, composite_bound, main_bound, norm_profile
from .errors import (
    ConvergenceError,
    DegenerateBudgetError,
    NumericError,
    ShapeError,
    StructureError,
)
from .estimator import (
    EstimatorConfig,
    RademacherEstimate,
    SupEstimate,
    correlation,
    empirical_rademacher,
    estimate_sup,
    project_to_budget,
)
from .families import SweepFamily, make_network
from .network import (
    InputSet,
    MembershipReport,
    NetworkSpec,
    forward,
    forward_many,
    load_inputs,
    load_network,
    save_inputs,
    save_network,
    validate_membership,
)
from .norms import (
    NormBudget,
    budget_from_network,
    frobenius_norm,
    load_budget,
    operator_norm,
    save_budget,
)
from .subseq import (
    brute_force_subsequence,
    check_subsequence,
    dyadic_subsequence,
    optimal_subsequence,
    subsequence_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ConvergenceError",
    "DegenerateBudgetError",
    "EstimatorConfig",
    "InputSet",
    "MembershipReport",
    "NetworkSpec",
    "NormBudget",
    "NormProfile",
    "NumericError",
    "RademacherEstimate",
    "ShapeError",
    "StructureError",
    "SupEstimate",
    "SweepFamily",
    "baseline_bound",
    "brute_force_subsequence",
    "budget_from_network",
    "check_subsequence",
    "composite_bound",
    "correlation",
    "dyadic_subsequence",
    "empirical_rademacher",
    "estimate_sup",
    "forward",
    "forward_many",
    "frobenius_norm",
    "load_budget",
    "load_inputs",
    "load_network",
    "main_bound",
    "make_network",
    "norm_profile",
    "operator_norm",
    "optimal_subsequence",
    "project_to_budget",
    "save_budget",
    "save_inputs",
    "save_network",
    "subsequence_cost",
    "validate_membership",
]
