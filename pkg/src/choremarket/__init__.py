"""Exact competitive-equilibrium solver for divisible chores.

Computes, with exact rational arithmetic, every competitive (CEEI-style)
utility profile of a chore division instance with negative budgets, one
witness allocation and supporting price vector per profile, and rounds a
divisible equilibrium into an indivisible allocation with provable fairness
guarantees (weighted envy-freeness up to one removed/added chore and weighted
proportionality up to one chore).
"""

from .certify import (
    CompetitiveOutcome,
    Rejection,
    check_competitive,
    min_weighted_disutility,
    tau_weights,
    verify_outcome,
)
from .core import (
    ConsumptionGraph,
    Instance,
    Preassignment,
    ValidatedInstance,
    consumption_graph,
    feasible,
    is_degenerate,
    is_pareto_optimal,
    is_weighted_envy_free,
    path_product,
    utility_of,
    validate_instance,
)
from .errors import (
    CapExceededError,
    CertificateError,
    ChoreMarketError,
    InvalidInstanceError,
    NonUnitCycleError,
    UnrealizableProfileError,
)
from .graphs import (
    TwoAgentGraph,
    enumerate_rich_family,
    enumerate_rich_family_dual,
    mww_graph_for_weights,
    pick_mode,
    prune,
    two_agent_mww,
)
from .oracle import OracleReport, brute_force_cu, kkt_check
from .recover import (
    CandidateProfile,
    InfluenceTable,
    candidate_utility,
    equal_split_utilities,
    influences,
)
from .rounding import (
    IndivisibleAllocation,
    RoundReport,
    acyclicize,
    budgets_close,
    check_ef11,
    check_prop1,
    round_fair,
    round_fair_report,
    round_to_integral,
)
from .solver import Refusal, SolutionSet, SolveMeta, all_allocations, leaf_peel, solve_all

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "CertificateError",
    "ChoreMarketError",
    "CandidateProfile",
    "CompetitiveOutcome",
    "ConsumptionGraph",
    "IndivisibleAllocation",
    "InfluenceTable",
    "Instance",
    "InvalidInstanceError",
    "NonUnitCycleError",
    "OracleReport",
    "Preassignment",
    "Refusal",
    "Rejection",
    "RoundReport",
    "SolutionSet",
    "SolveMeta",
    "TwoAgentGraph",
    "UnrealizableProfileError",
    "ValidatedInstance",
    "acyclicize",
    "all_allocations",
    "brute_force_cu",
    "budgets_close",
    "candidate_utility",
    "check_competitive",
    "check_ef11",
    "check_prop1",
    "consumption_graph",
    "enumerate_rich_family",
    "enumerate_rich_family_dual",
    "equal_split_utilities",
    "feasible",
    "influences",
    "is_degenerate",
    "is_pareto_optimal",
    "is_weighted_envy_free",
    "kkt_check",
    "leaf_peel",
    "min_weighted_disutility",
    "mww_graph_for_weights",
    "path_product",
    "pick_mode",
    "prune",
    "round_fair",
    "round_fair_report",
    "round_to_integral",
    "solve_all",
    "tau_weights",
    "two_agent_mww",
    "utility_of",
    "validate_instance",
    "verify_outcome",
]
