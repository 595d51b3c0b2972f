"""Decide reachability of integers under finite sets of affine maps z -> a*z + b.

Over the integers and over the naturals (every intermediate value must stay
nonnegative).  Reachable verdicts carry run-length-encoded witnesses that
can be checked independently with ``check_witness``.
"""

from .affine import (
    AffineMap,
    AffineSystem,
    Domain,
    apply_rle,
    apply_word,
    check_witness,
    compose_word,
    power,
    shift_normalize,
)
from .errors import AffreachError, PreconditionError, ResourceExceeded, WitnessUnavailable
from .monotone import (
    ExtremumMode,
    ModExtremumResult,
    clause_extremum,
    increase_predicate,
    mod_extremum,
    mod_extremum_valid,
    valid_increase_predicate,
)
from .oracle import KnapsackInstance, bfs_oracle, knapsack_dp, knapsack_to_system, random_system
from .regex import (
    ModAutomaton,
    automaton_to_regex,
    build_mod_automaton,
    eliminate_empty,
    mod_reachable,
    to_dnf,
)
from .solver import SolveStats, decide, decide_n, decide_z, extract_witness
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "AffineSystem",
    "AffreachError",
    "Domain",
    "ExtremumMode",
    "KnapsackInstance",
    "ModAutomaton",
    "ModExtremumResult",
    "PreconditionError",
    "ResourceExceeded",
    "SolveStats",
    "Verdict",
    "WitnessUnavailable",
    "apply_rle",
    "apply_word",
    "automaton_to_regex",
    "bfs_oracle",
    "build_mod_automaton",
    "check_witness",
    "clause_extremum",
    "compose_word",
    "decide",
    "decide_n",
    "decide_z",
    "eliminate_empty",
    "extract_witness",
    "increase_predicate",
    "knapsack_dp",
    "knapsack_to_system",
    "mod_extremum",
    "mod_extremum_valid",
    "mod_reachable",
    "power",
    "random_system",
    "shift_normalize",
    "to_dnf",
    "valid_increase_predicate",
]
