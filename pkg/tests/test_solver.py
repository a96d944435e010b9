import random

import pytest
from hypothesis import given, settings

from conftest import formulas
from naesat.formula import Clause, Decomposition, Formula, Literal, ProfileError, nae_eval
from naesat.gadgets import canonical_no_instance, eq_gadget, eq_lin_gadget
from naesat.generator import GenSpec, gen_k_disjoint
from naesat.solver import (
    ALWAYS_SATISFIABLE,
    POLY_TIME_PER_LITERATURE,
    CapExceeded,
    count_solutions,
    decide_k_disjoint,
    solve_backtracking,
    solve_exhaustive,
    solve_unfolded,
)

# frozen from count_solutions over 2^10 (EQ_lin) and 2^13 (EQ); the
# gadget enumerator below re-derives them as extensions per polarity
EQ_LIN_FRAGMENT_COUNT = 20
EQ_FRAGMENT_COUNT = 6


def test_no_instance_unsat():
    f, _ = canonical_no_instance()
    r = solve_exhaustive(f)
    assert not r.satisfiable and r.assignments_tested == 256
    assert count_solutions(f) == 0
    assert not solve_backtracking(f).satisfiable


def test_empty_formula():
    r = solve_exhaustive(Formula(0))
    assert r.satisfiable and r.witness == {}


def test_single_clause_count():
    f = Formula.from_named([["a", "b", "c"]])
    assert count_solutions(f) == 6
    assert solve_exhaustive(f).witness == {0: True, 1: True, 2: False}


def test_cap():
    with pytest.raises(CapExceeded, match="solve_backtracking"):
        solve_exhaustive(Formula(31))


def test_eq_lin_fragment_count():
    g = eq_lin_gadget()
    f, _ = g.formula()
    assert f.num_vars == 10
    from naesat.gadgets import extensions
    per_polarity = [len(extensions(g, (v,) * 4)) for v in (True, False)]
    assert count_solutions(f) == sum(per_polarity) == EQ_LIN_FRAGMENT_COUNT
    assert per_polarity[0] == per_polarity[1]


def test_eq_fragment_count():
    f, _ = eq_gadget().formula()
    assert count_solutions(f) == EQ_FRAGMENT_COUNT


def _random_formula(rng, n, m):
    seen, clauses = set(), []
    for _ in range(m):
        size = rng.choice((2, 3, 3, 3))
        vs = rng.sample(range(n), size)
        c = Clause(Literal(v, rng.random() < 0.3) for v in vs)
        if c not in seen:
            seen.add(c)
            clauses.append(c)
    return Formula(n, tuple(clauses))


def test_oracle_agreement_500():
    rng = random.Random(20261015)
    disagreements = 0
    for _ in range(500):
        n = rng.randint(3, 20)
        # around the nae threshold so both verdicts occur
        f = _random_formula(rng, n, rng.randint(n, int(2.6 * n)))
        ex = solve_exhaustive(f)
        bt = solve_backtracking(f)
        disagreements += ex.satisfiable != bt.satisfiable
        if bt.satisfiable:
            assert nae_eval(f, bt.witness)
    assert disagreements == 0


@settings(max_examples=200)
@given(formulas(max_vars=10, max_clauses=25))
def test_backtracking_agrees(f):
    assert solve_backtracking(f).satisfiable == solve_exhaustive(f).satisfiable
    assert solve_backtracking(f, chains=False).satisfiable == solve_exhaustive(f).satisfiable


@settings(max_examples=200)
@given(formulas(max_vars=12, max_clauses=25))
def test_fold_agrees_with_unfolded(f):
    folded, unfolded = solve_exhaustive(f), solve_unfolded(f)
    assert folded.satisfiable == unfolded.satisfiable
    if folded.satisfiable:
        # both return the lexicographically lowest witness; it starts with T
        assert folded.witness == unfolded.witness


@settings(max_examples=100)
@given(formulas(max_vars=9, max_clauses=12))
def test_count_matches_enumeration(f):
    from conftest import all_assignments
    assert count_solutions(f) == sum(bool(nae_eval(f, a)) for a in all_assignments(f.num_vars))


def test_decide_k1():
    f = Formula.from_named([["a", "b", "c"], ["d", "e", "f"]])
    r = decide_k_disjoint(f, Decomposition([(0, 1)]), 1)
    assert r.satisfiable and r.guarantee == ALWAYS_SATISFIABLE


def test_decide_intro_k2():
    f, d = canonical_no_instance()
    sub = Formula(9, f.clauses[:6])
    assert solve_exhaustive(sub).satisfiable
    r = decide_k_disjoint(sub, Decomposition([(0, 1, 2), (3, 4, 5)]), 2)
    assert r.satisfiable and r.guarantee == ALWAYS_SATISFIABLE


def test_decide_k3_flag():
    f, d = gen_k_disjoint(GenSpec(9, 3, require_pairwise_disjoint=True, seed=1))
    assert decide_k_disjoint(f, d, 3).guarantee == POLY_TIME_PER_LITERATURE


def test_decide_no_instance():
    f, d = canonical_no_instance()
    r = decide_k_disjoint(f, d, 4)
    assert not r.satisfiable and r.guarantee is None


def test_decide_profile_error():
    f, d = canonical_no_instance()
    with pytest.raises(ProfileError):
        decide_k_disjoint(f, d, 3)
