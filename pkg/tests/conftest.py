import itertools
from pathlib import Path

import hypothesis.strategies as st
from hypothesis import settings

from naesat.formula import Clause, Formula, Literal

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@st.composite
def formulas(draw, min_vars=2, max_vars=8, max_clauses=12, positive=False, sizes=(2, 3)):
    n = draw(st.integers(min_vars, max_vars))
    sizes = [s for s in sizes if s <= n]
    m = draw(st.integers(0, max_clauses))
    seen = set()
    clauses = []
    for _ in range(m):
        size = draw(st.sampled_from(sizes))
        vs = draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
        signs = [False] * size if positive else draw(st.lists(st.booleans(), min_size=size, max_size=size))
        c = Clause(Literal(v, s) for v, s in zip(vs, signs))
        if c not in seen:
            seen.add(c)
            clauses.append(c)
    return Formula(n, tuple(clauses))


@st.composite
def formula_and_assignment(draw, **kw):
    f = draw(formulas(**kw))
    values = draw(st.lists(st.booleans(), min_size=f.num_vars, max_size=f.num_vars))
    return f, dict(enumerate(values))


def all_assignments(n):
    for bits in itertools.product((True, False), repeat=n):
        yield dict(enumerate(bits))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail}"
    ACCEPTANCE[number] = line
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
