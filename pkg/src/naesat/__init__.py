"""Not-all-equal satisfiability: formulas, propagation, solvers, gadgets,
reductions between restricted variants, and the hypergraph view."""

from .formula import (
    Clause,
    Decomposition,
    Formula,
    IncompleteAssignment,
    Literal,
    NaeVerdict,
    Profile,
    ProfileError,
    StructureReport,
    appearance_counts,
    clause_nae,
    flip_assignment,
    is_linear,
    lit,
    nae_eval,
    validate,
)
from .gadgets import canonical_no_instance, eq_gadget, eq_lin_gadget, padding_set, verify_equality_gadget
from .generator import GenerationError, GenSpec, gen_k_disjoint, gen_positive_e4
from .hypergraph import Hypergraph, check_matching, formula_to_hypergraph, hypergraph_to_formula
from .propagation import forced_equal_classes, learn_two_clauses, propagate, resolve
from .reductions import pipeline, pull_back, push_forward, run_route
from .solver import count_solutions, decide_k_disjoint, solve_backtracking, solve_exhaustive
from .textio import ParseError, parse, serialize

__version__ = "0.1.0"
