import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import formula_and_assignment, formulas
from naesat.formula import (
    Clause,
    Decomposition,
    Formula,
    IncompleteAssignment,
    Literal,
    Profile,
    appearance_counts,
    clause_nae,
    flip_assignment,
    is_linear,
    lit,
    nae_eval,
    validate,
)
from naesat.gadgets import canonical_no_instance


def abc():
    return Formula.from_named([["a", "b", "c"]])


def test_literal_complement_and_index():
    x = lit(2)
    assert ~x == Literal(2, True)
    assert ~~x == x
    assert (x.index, (~x).index) == (4, 5)


def test_clause_rejects_repeated_variable():
    with pytest.raises(ValueError):
        Clause([lit(0), lit(0, True), lit(1)])


def test_clause_equality_ignores_order():
    assert Clause([lit(0), lit(1), lit(2)]) == Clause([lit(2), lit(0), lit(1)])


def test_formula_rejects_duplicates_and_bad_sizes():
    with pytest.raises(ValueError, match="duplicates"):
        Formula(3, (Clause([lit(0), lit(1), lit(2)]), Clause([lit(2), lit(1), lit(0)])))
    with pytest.raises(ValueError, match="2- and 3-clauses"):
        Formula(4, (Clause([lit(0), lit(1), lit(2), lit(3)]),))
    with pytest.raises(ValueError, match="outside"):
        Formula(2, (Clause([lit(0), lit(1), lit(2)]),))


def test_nae_eval_basic():
    f = abc()
    assert nae_eval(f, f.named(a=True, b=False, c=True))
    verdict = nae_eval(f, f.named(a=True, b=True, c=True))
    assert not verdict and verdict.violated == 0


def test_nae_eval_lowest_violated_index():
    f, _ = canonical_no_instance()
    # a=b=c=T leaves {a,b,c} all true: clause index 0
    a = {v: True for v in range(9)}
    assert nae_eval(f, a).violated == 0
    # only {a,d,g} (index 3) monochromatic
    a = f.named(a=True, b=False, c=False, d=True, e=False, f=True, g=True, h=False, i=False)
    assert nae_eval(f, a).violated == 3


def test_incomplete_assignment_message():
    f = abc()
    with pytest.raises(IncompleteAssignment, match="^incomplete assignment"):
        nae_eval(f, {0: True})


def test_negated_clause():
    f = Formula(3, (Clause([lit(0), lit(1, True), lit(2)]),))
    assert not nae_eval(f, {0: True, 1: False, 2: True})
    assert nae_eval(f, {0: True, 1: True, 2: True})


@given(formula_and_assignment(max_vars=10, max_clauses=20))
def test_flip_symmetry(fa):
    f, a = fa
    assert bool(nae_eval(f, a)) == bool(nae_eval(f, flip_assignment(a)))


@given(formula_and_assignment(max_vars=8, max_clauses=10))
def test_clause_nae_is_not_all_equal(fa):
    f, a = fa
    for c in f.clauses:
        values = {l.value(a) for l in c}
        assert clause_nae(c, a) == (len(values) == 2)


def test_no_instance_structure():
    f, d = canonical_no_instance()
    r = validate(f, d, Profile.positive_k_disjoint(4, linear=True))
    assert r.passed
    assert r.num_vars == 9 and r.num_clauses == 12
    assert all(p == (4, 0) for p in r.appearance_counts)
    assert r.decomposition_valid == (True,) * 4


def test_linearity_violation():
    f = Formula.from_named([["a", "b", "c"], ["a", "b", "d"]])
    assert not is_linear(f)
    r = validate(f, profile=Profile("linear", linear=True))
    assert r.failure == "linear"


def test_validate_reports_block_problems():
    f, _ = canonical_no_instance()
    d = Decomposition([(0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10)])
    r = validate(f, d, Profile.positive_k_disjoint(4))
    assert not r.passed
    assert "cover" in r.failure
    d = Decomposition([(0, 1, 2), (0, 3, 4, 5), (6, 7, 8), (9, 10, 11)])
    r = validate(f, d, Profile.positive_k_disjoint(4))
    assert "share a clause" in r.failure or "repeats" in r.failure
    with pytest.raises(ValueError):
        validate(f, Decomposition([(12,)]))


def test_appearance_counts_signed():
    f = Formula(3, (Clause([lit(0), lit(1, True), lit(2)]), Clause([lit(0, True), lit(1, True)])))
    assert appearance_counts(f) == [(1, 1), (0, 2), (1, 0)]


@pytest.mark.parametrize("name", [
    "positive-e4", "positive-4-disjoint-e4", "positive-linear-5-disjoint-e5",
    "linear-pq:3,1", "two-three-one-3clause", "two-three-one-2clause",
])
def test_profile_parse(name):
    assert Profile.parse(name).name


def test_profile_parse_rejects():
    with pytest.raises(ValueError):
        Profile.parse("positive-4-disjoint-e5")


@given(formulas(max_vars=7, max_clauses=10))
def test_linear_matches_pair_definition(f):
    expected = all(
        len(set(a.variables) & set(b.variables)) <= 1
        for i, a in enumerate(f.clauses) for b in f.clauses[i + 1:]
    )
    assert is_linear(f) == expected


def test_report_lines_are_tab_separated():
    f, d = canonical_no_instance()
    lines = validate(f, d, Profile.positive_e(4)).lines()
    assert lines[0] == "variables\t9"
    assert lines[-1].endswith("PASS")


@given(st.integers(0, 5))
def test_empty_formula_is_satisfied(n):
    assert nae_eval(Formula(n), {v: True for v in range(n)})
