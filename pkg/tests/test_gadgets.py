import itertools

import pytest

from naesat.formula import Profile, is_linear, nae_eval, validate
from naesat.gadgets import (
    EQ_WITNESS_TRUE,
    PADDING_TRUE,
    canonical_no_instance,
    eq_gadget,
    eq_lin_gadget,
    extensions,
    padding_set,
    verify_equality_gadget,
)
from naesat.solver import solve_exhaustive


@pytest.mark.parametrize("make, clauses, aux", [(eq_gadget, 15, 9), (eq_lin_gadget, 12, 6)])
def test_gadget_sizes(make, clauses, aux):
    g = make()
    assert len(g.clauses) == clauses and len(g.aux) == aux
    assert all(c.positive and len(c) == 3 for c in g.clauses)


@pytest.mark.parametrize("make", [eq_gadget, eq_lin_gadget])
def test_equality_table(make):
    v = verify_equality_gadget(make())
    assert v.passed, v.failures()
    assert [r.exists for r in v.rows].count(True) == 2


def test_eq_columns():
    g = eq_gadget()
    f, d = g.formula()
    x = set(range(4))
    # column 1 has no interface variable, column q misses exactly x_q
    for q, col in enumerate(d.blocks):
        present = {v for j in col for v in f.clauses[j].variables} & x
        assert present == (x - {q} if q else set())
    r = validate(f, d)
    assert all(br.variable_disjoint for br in r.blocks)
    # every auxiliary appears once per column
    aux = set(range(4, 13))
    for col in d.blocks:
        seen = [v for j in col for v in f.clauses[j].variables if v in aux]
        assert sorted(seen) == sorted(aux)


def test_eq_printed_columns():
    g = eq_gadget()
    named = [{g.interface_names[g.interface.index(v)] if v in g.interface else
              next(n for n, a in g.aux.items() if a == v) for v in c.variables} for c in g.clauses]
    cols = [[named[j] for j in col] for col in g.columns]
    assert cols[1] == [{"a", "g", "x4"}, {"b", "e", "x3"}, {"d", "i", "x1"}, {"c", "f", "h"}]
    assert cols[0] == [{"a", "b", "c"}, {"d", "e", "f"}, {"g", "h", "i"}]


def test_eq_constructive_witness():
    g = eq_gadget()
    for x in (True, False):
        a = dict.fromkeys(g.interface, x)
        a.update((v, x if n in EQ_WITNESS_TRUE else not x) for n, v in g.aux.items())
        f, _ = g.formula()
        assert nae_eval(f, {i: a[v] for i, v in enumerate(g.variables)})


def test_eq_lin_linear_and_columns():
    g = eq_lin_gadget()
    f, d = g.formula()
    assert is_linear(f)
    for q, col in enumerate(d.blocks):
        vs = [v for j in col for v in f.clauses[j].variables]
        assert len(vs) == len(set(vs))
        # each column covers the six auxiliaries and three interface variables
        assert set(range(4, 10)) <= set(vs) and len(set(vs) & set(range(4))) == 3


def test_eq_lin_extension_count():
    g = eq_lin_gadget()
    assert len(extensions(g, (True,) * 4)) == len(extensions(g, (False,) * 4)) > 0


def test_interface_must_be_distinct():
    with pytest.raises(ValueError):
        eq_gadget((0, 0, 1, 2))


def test_padding_neutral():
    g = padding_set()
    assert len(g.clauses) == 11 and len(g.aux) == 6
    assert [len(c) for c in g.columns] == [2, 3, 3, 3]
    # a,b,c = T and d,e,f = F satisfy S(t, 1..4) whatever the copies hold
    for values in itertools.product((True, False), repeat=9):
        a = dict(zip(g.interface, values))
        a.update((v, n in PADDING_TRUE) for n, v in g.aux.items())
        assert all(len({a[l.var] for l in c}) == 2 for c in g.clauses)


def test_padding_blocks_partition_copies_and_aux():
    g = padding_set()
    f, d = g.formula()
    r = validate(f, d)
    assert all(br.variable_disjoint for br in r.blocks)
    # S(t,1) covers the auxiliaries; S(t,q) adds one copy family
    assert r.blocks[0].uncovered == tuple(range(9))


def test_no_instance():
    f, d = canonical_no_instance()
    assert validate(f, d, Profile.positive_k_disjoint(4, linear=True)).passed
    assert not solve_exhaustive(f).satisfiable
