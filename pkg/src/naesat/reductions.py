"""Polynomial reductions between the restricted nae-satisfiability variants.

Every reduction returns a :class:`ReductionArtifact`. Its ``forward`` table
gives each target variable as a source literal or a constant, which is all
the constructive direction of each proof needs; ``backmap`` names the target
variable read back for each source variable.

Target numbering is copies first, then gadget auxiliaries, both in source
variable order, so repeated runs are identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .formula import (
    Assignment,
    Clause,
    Decomposition,
    Formula,
    Literal,
    Profile,
    ProfileError,
    is_total,
    nae_eval,
    validate,
)
from .gadgets import EQ_WITNESS_TRUE, PADDING_TRUE, eq_gadget, eq_lin_gadget, padding_set


class Origin(NamedTuple):
    """Where a target variable came from.

    kind is one of ``copy``, ``aux``, ``plus``, ``minus``, ``same``;
    ``source`` is the source variable (None for padding auxiliaries).
    """

    kind: str
    source: int | None
    detail: tuple[str, ...] = ()


class Rule(NamedTuple):
    """Forward value of a target variable.

    With ``source`` None the value is the constant ``flip``; otherwise it is
    the source variable's value, negated when ``flip`` is set.
    """

    source: int | None
    flip: bool = False

    def apply(self, a: Assignment) -> bool:
        if self.source is None:
            return self.flip
        return a[self.source] != self.flip


@dataclass(frozen=True)
class ReductionArtifact:
    route: str
    source: Formula
    source_decomposition: Decomposition | None
    target: Formula
    target_decomposition: Decomposition
    profile: Profile
    provenance: tuple[Origin, ...]
    forward: tuple[Rule, ...]
    backmap: tuple[int, ...]

    def __post_init__(self):
        if len(self.provenance) != self.target.num_vars or len(self.forward) != self.target.num_vars:
            raise ValueError("provenance and forward tables must cover every target variable")
        if len(self.backmap) != self.source.num_vars:
            raise ValueError("backmap must cover every source variable")


def _require(f: Formula, d: Decomposition | None, profile: Profile) -> None:
    report = validate(f, d, profile)
    if not report.passed:
        raise ProfileError(f"source is not {profile.name}: {report.failure}")


def _finish(route, f, d, target, td, profile, provenance, forward, backmap) -> ReductionArtifact:
    report = validate(target, td, profile)
    if not report.passed:
        raise AssertionError(f"{route}: target fails {profile.name}: {report.failure}")
    return ReductionArtifact(
        route, f, d, target, td, profile, tuple(provenance), tuple(forward), tuple(backmap)
    )


def _appearance_copies(f: Formula, per_var: int) -> list[list[int]]:
    """For clause j, position p: which appearance (0-based) of its variable
    it is, ordered by clause index then position."""
    seen = [0] * f.num_vars
    out = []
    for c in f.clauses:
        row = []
        for l in c:
            row.append(seen[l.var])
            seen[l.var] += 1
        out.append(row)
    assert all(s == per_var for s in seen)
    return out


# --- Positive NAE-3-Sat-E4 -> Positive 4-Disjoint NAE-3-Sat ------------------


def split_and_equalize(f: Formula) -> ReductionArtifact:
    """One copy per appearance, tied together by an EQ gadget per variable.

    Block 1 holds the renamed clauses and every EQ(x, 1) column; block q >= 2
    holds the EQ(x, q) columns and misses exactly the copies x_q.
    """
    _require(f, None, Profile.positive_e(4))
    n = f.num_vars
    which = _appearance_copies(f, 4)

    clauses = [
        Clause(Literal(4 * l.var + which[j][p]) for p, l in enumerate(c))
        for j, c in enumerate(f.clauses)
    ]
    blocks = [list(range(len(clauses))), [], [], []]
    provenance = [Origin("copy", x, (str(i),)) for x in range(n) for i in (1, 2, 3, 4)]
    forward = [Rule(x) for x in range(n) for _ in range(4)]
    fresh = itertools.count(4 * n)
    for x in range(n):
        g = eq_gadget(tuple(4 * x + i for i in range(4)), fresh)
        base = len(clauses)
        clauses.extend(g.clauses)
        for q, column in enumerate(g.columns):
            blocks[q].extend(base + j for j in column)
        for name in g.aux:
            provenance.append(Origin("aux", x, ("EQ", name)))
            forward.append(Rule(x, name not in EQ_WITNESS_TRUE))

    names = None
    if f.var_names is not None:
        names = [f"{f.name(x)}_{i}" for x in range(n) for i in (1, 2, 3, 4)]
        names += [f"{f.name(x)}.{a}" for x in range(n) for a in "abcdefghi"]
    target = Formula(13 * n, tuple(clauses), names)
    td = Decomposition(blocks)
    profile = Profile("Positive 4-Disjoint NAE-3-Sat", positive=True, blocks=4)
    art = _finish("split4", f, None, target, td, profile, provenance, forward,
                  [4 * x for x in range(n)])
    report = validate(target, td)
    assert report.blocks[0].is_partition
    for q in (1, 2, 3):
        assert report.blocks[q].uncovered == tuple(4 * x + q for x in range(n))
    return art


# --- 4-disjoint with equal gaps -> four partitions ------------------------------


def uncovered_sets(f: Formula, d: Decomposition) -> list[tuple[int, ...]]:
    return [br.uncovered for br in validate(f, d).blocks]


def complete_partitions(f: Formula, d: Decomposition) -> ReductionArtifact:
    """Three copies of the instance plus S(t, q) padding for each gap index t.

    Needs block 1 to be a partition and blocks 2-4 to be sets of pairwise
    variable-disjoint clauses whose uncovered variable sets have equal size.
    """
    pre = Profile("Positive 4-Disjoint NAE-3-Sat", positive=True, blocks=4, disjoint=False)
    report = validate(f, d, pre)
    if not report.passed:
        raise ProfileError(f"source is not {pre.name}: {report.failure}")
    if not report.blocks[0].is_partition:
        raise ProfileError(f"block 1 is not a partition: misses {len(report.blocks[0].uncovered)} variable(s)")
    gaps = [report.blocks[q].uncovered for q in (1, 2, 3)]
    sizes = [len(g) for g in gaps]
    if len(set(sizes)) != 1:
        raise ProfileError(f"uncovered sets of blocks 2-4 differ in size: {sizes[0]}, {sizes[1]}, {sizes[2]}")
    s = sizes[0]
    n, m = f.num_vars, f.num_clauses

    clauses = []
    blocks: list[list[int]] = [[], [], [], []]
    block_sets = [set(b) for b in d.blocks]
    member = [[q for q in range(4) if j in block_sets[q]] for j in range(m)]
    for r in range(3):
        for j, c in enumerate(f.clauses):
            for q in member[j]:
                blocks[q].append(len(clauses))
            clauses.append(Clause(Literal(r * n + l.var) for l in c))
    provenance = [Origin("copy", v, (str(r + 1),)) for r in range(3) for v in range(n)]
    forward = [Rule(v) for _ in range(3) for v in range(n)]
    fresh = itertools.count(3 * n)
    for t in range(s):
        copies = [tuple(r * n + gaps[q][t] for r in range(3)) for q in range(3)]
        g = padding_set(*copies, fresh=fresh, t=t + 1)
        base = len(clauses)
        clauses.extend(g.clauses)
        for q, column in enumerate(g.columns):
            blocks[q].extend(base + j for j in column)
        for name in g.aux:
            provenance.append(Origin("aux", None, ("S", str(t + 1), name)))
            forward.append(Rule(None, name in PADDING_TRUE))

    names = None
    if f.var_names is not None:
        names = [f"{f.name(v)}^{r + 1}" for r in range(3) for v in range(n)]
        names += [f"{a}_{t + 1}" for t in range(s) for a in "abcdef"]
    target = Formula(3 * n + 6 * s, tuple(clauses), names)
    td = Decomposition(blocks)
    if report.blocks_pairwise_clause_disjoint:
        profile = Profile.positive_k_disjoint(4)
    else:
        profile = Profile("Positive 4 partitions", positive=True, blocks=4, disjoint=False, partitions=True)
    return _finish("complete", f, d, target, td, profile, provenance, forward, list(range(n)))


# --- Positive 4-Disjoint E4 -> Positive Linear 4-Disjoint E4 -----------------------


def linearize(f: Formula, d: Decomposition) -> ReductionArtifact:
    """Block i is renamed onto copy i; EQ_lin gadgets tie the four copies."""
    _require(f, d, Profile.positive_k_disjoint(4))
    n = f.num_vars
    clauses = []
    blocks: list[list[int]] = [[], [], [], []]
    for i in range(4):
        for j in d.blocks[i]:
            blocks[i].append(len(clauses))
            clauses.append(Clause(Literal(4 * l.var + i) for l in f.clauses[j]))
    provenance = [Origin("copy", x, (str(i),)) for x in range(n) for i in (1, 2, 3, 4)]
    forward = [Rule(x) for x in range(n) for _ in range(4)]
    fresh = itertools.count(4 * n)
    for x in range(n):
        g = eq_lin_gadget(tuple(4 * x + i for i in range(4)), fresh)
        base = len(clauses)
        clauses.extend(g.clauses)
        for q, column in enumerate(g.columns):
            blocks[q].extend(base + j for j in column)
        for name in g.aux:
            provenance.append(Origin("aux", x, ("EQ_lin", name)))
            forward.append(Rule(x, True))

    names = None
    if f.var_names is not None:
        names = [f"{f.name(x)}_{i}" for x in range(n) for i in (1, 2, 3, 4)]
        names += [f"{f.name(x)}.{a}" for x in range(n) for a in "abcdef"]
    target = Formula(10 * n, tuple(clauses), names)
    return _finish("linearize", f, d, target, Decomposition(blocks),
                   Profile.positive_k_disjoint(4, linear=True), provenance, forward,
                   [4 * x for x in range(n)])


# --- k -> k+1 -------------------------------------------------------------------


def lift_k(f: Formula, d: Decomposition) -> ReductionArtifact:
    """Three disjoint copies plus a junction clause {x_1, x_2, x_3} per variable."""
    k = d.k
    _require(f, d, Profile.positive_k_disjoint(k, linear=True))
    n, m = f.num_vars, f.num_clauses
    clauses = []
    blocks: list[list[int]] = [[] for _ in range(k + 1)]
    member = d.block_of()
    for r in range(3):
        for j, c in enumerate(f.clauses):
            blocks[member[j]].append(len(clauses))
            clauses.append(Clause(Literal(r * n + l.var) for l in c))
    for x in range(n):
        blocks[k].append(len(clauses))
        clauses.append(Clause(Literal(r * n + x) for r in range(3)))
    provenance = [Origin("copy", x, (str(r + 1),)) for r in range(3) for x in range(n)]
    forward = [Rule(x, r == 2) for r in range(3) for x in range(n)]
    names = None
    if f.var_names is not None:
        names = [f"{f.name(x)}_{r + 1}" for r in range(3) for x in range(n)]
    target = Formula(3 * n, tuple(clauses), names)
    return _finish("liftk", f, d, target, Decomposition(blocks),
                   Profile.positive_k_disjoint(k + 1, linear=True), provenance, forward,
                   list(range(n)))


# --- (p, q) signatures ----------------------------------------------------------------


def flip_partitions(f: Formula, d: Decomposition, q: int) -> ReductionArtifact:
    """Negate every literal in the first ``q`` blocks.

    Each variable then appears k-q times unnegated and q times negated; a
    clause and its all-negated twin are nae-satisfied by the same
    assignments, so values carry over unchanged.
    """
    k = d.k
    if not 0 <= q <= k:
        raise ValueError(f"q={q} out of range 0..{k}")
    report = validate(f, d, Profile.positive_k_disjoint(k))
    if not report.passed:
        raise ProfileError(f"source is not Positive {k}-Disjoint E{k}: {report.failure}")
    flipped = set(itertools.chain.from_iterable(d.blocks[:q]))
    clauses = [
        Clause(Literal(l.var, j in flipped) for l in c) for j, c in enumerate(f.clauses)
    ]
    target = Formula(f.num_vars, tuple(clauses), f.var_names)
    profile = Profile(
        f"{'Linear ' if report.linear else ''}NAE-3-Sat ({k - q},{q}) {k}-Disjoint",
        linear=report.linear, signature=(k - q, q), exact=k, blocks=k, partitions=True,
    )
    n = f.num_vars
    return _finish(f"flip:{q}", f, d, target, d, profile,
                   [Origin("same", v) for v in range(n)], [Rule(v) for v in range(n)], list(range(n)))


# --- NAE-(2,3)-Sat ---------------------------------------------------------------


def to_23_one_3clause(f: Formula) -> ReductionArtifact:
    """Copies x^(j) and twins y^(j) per appearance; an 8-cycle of 2-clauses
    forces all copies equal and each twin opposite.

    Blocks: the {x^(j), y^(j)} edges, the {y^(j), x^(j+1)} edges, and all
    3-clauses; each is a partition of the target variables.
    """
    _require(f, None, Profile.positive_e(4))
    n, m = f.num_vars, f.num_clauses
    which = _appearance_copies(f, 4)

    def xv(i, j):
        return 4 * i + j

    def yv(i, j):
        return 4 * n + 4 * i + j

    clauses = []
    blocks: list[list[int]] = [[], [], []]
    for i in range(n):
        for j in (3, 0, 1, 2):
            blocks[0].append(len(clauses))
            clauses.append(Clause((Literal(xv(i, j)), Literal(yv(i, j)))))
            blocks[1].append(len(clauses))
            clauses.append(Clause((Literal(yv(i, j)), Literal(xv(i, (j + 1) % 4)))))
    for copy in (xv, yv):
        for j, c in enumerate(f.clauses):
            blocks[2].append(len(clauses))
            clauses.append(Clause(Literal(copy(l.var, which[j][p])) for p, l in enumerate(c)))

    provenance = [Origin("copy", i, ("x", str(j + 1))) for i in range(n) for j in range(4)]
    provenance += [Origin("copy", i, ("y", str(j + 1))) for i in range(n) for j in range(4)]
    forward = [Rule(i) for i in range(n) for _ in range(4)]
    forward += [Rule(i, True) for i in range(n) for _ in range(4)]
    names = None
    if f.var_names is not None:
        names = [f"{p}{f.name(i)}^{j + 1}" for p in ("", "y.") for i in range(n) for j in range(4)]
    target = Formula(8 * n, tuple(clauses), names)
    return _finish("to23-3", f, None, target, Decomposition(blocks),
                   Profile.two_three_one_3clause(), provenance, forward,
                   [xv(i, 0) for i in range(n)])


def to_23_one_2clause(f: Formula, d: Decomposition) -> ReductionArtifact:
    """Negate blocks 1-2, then split every variable into x+ and x- joined by
    the 2-clause {x+, x-}; negated appearances move to x-, the others to x+.

    Blocks: all {x+, x-}, then C''_1 with C''_3, then C''_2 with C''_4.
    """
    _require(f, d, Profile.positive_k_disjoint(4, linear=True))
    n = f.num_vars
    clauses = [Clause((Literal(x), Literal(n + x))) for x in range(n)]
    blocks: list[list[int]] = [list(range(n)), [], []]
    member = d.block_of()
    for j, c in enumerate(f.clauses):
        b = member[j]
        shift = n if b in (0, 1) else 0
        blocks[1 if b in (0, 2) else 2].append(len(clauses))
        clauses.append(Clause(Literal(shift + l.var) for l in c))
    provenance = [Origin("plus", x) for x in range(n)] + [Origin("minus", x) for x in range(n)]
    forward = [Rule(x) for x in range(n)] + [Rule(x, True) for x in range(n)]
    names = None
    if f.var_names is not None:
        names = [f"{f.name(x)}+" for x in range(n)] + [f"{f.name(x)}-" for x in range(n)]
    target = Formula(2 * n, tuple(clauses), names)
    return _finish("to23-2", f, d, target, Decomposition(blocks),
                   Profile.two_three_one_2clause(), provenance, forward, list(range(n)))


# --- composition and witness transport --------------------------------------------


def compose(first: ReductionArtifact, second: ReductionArtifact) -> ReductionArtifact:
    """Chain two reductions whose middle instances coincide."""
    if second.source != first.target:
        raise ValueError("second reduction does not start where the first ends")
    forward = []
    provenance = []
    for rule, origin in zip(second.forward, second.provenance):
        if rule.source is None:
            forward.append(rule)
            provenance.append(origin)
            continue
        inner = first.forward[rule.source]
        if inner.source is None:
            forward.append(Rule(None, inner.flip != rule.flip))
        else:
            forward.append(Rule(inner.source, inner.flip != rule.flip))
        prev = first.provenance[rule.source]
        provenance.append(Origin(origin.kind, prev.source, prev.detail + (prev.kind,) + origin.detail))
    backmap = [second.backmap[v] for v in first.backmap]
    return ReductionArtifact(
        f"{first.route}+{second.route}", first.source, first.source_decomposition,
        second.target, second.target_decomposition, second.profile,
        tuple(provenance), tuple(forward), tuple(backmap),
    )


def pipeline(f: Formula, k: int = 4) -> tuple[ReductionArtifact, list[ReductionArtifact]]:
    """Positive E4 source through split4, complete, linearize, then lift_k up to k."""
    if k < 4:
        raise ValueError("the pipeline produces k >= 4")
    stages = [split_and_equalize(f)]
    stages.append(complete_partitions(stages[-1].target, stages[-1].target_decomposition))
    stages.append(linearize(stages[-1].target, stages[-1].target_decomposition))
    for _ in range(k - 4):
        stages.append(lift_k(stages[-1].target, stages[-1].target_decomposition))
    art = stages[0]
    for s in stages[1:]:
        art = compose(art, s)
    return art, stages


def push_forward(art: ReductionArtifact, a: Assignment) -> dict[int, bool]:
    """Map a source witness to a target witness (checked)."""
    if not is_total(art.source, a) or not nae_eval(art.source, a):
        raise ValueError("not a witness of the source instance")
    b = {t: rule.apply(a) for t, rule in enumerate(art.forward)}
    verdict = nae_eval(art.target, b)
    if not verdict:
        raise AssertionError(f"{art.route}: pushed assignment violates target clause {verdict.violated}")
    return b


def pull_back(art: ReductionArtifact, b: Assignment) -> dict[int, bool]:
    """Map a target witness to a source witness (checked)."""
    if not is_total(art.target, b) or not nae_eval(art.target, b):
        raise ValueError("not a witness of the target instance")
    a = {x: b[t] for x, t in enumerate(art.backmap)}
    verdict = nae_eval(art.source, a)
    if not verdict:
        raise AssertionError(f"{art.route}: pulled assignment violates source clause {verdict.violated}")
    return a


ROUTES = ("split4", "complete", "linearize", "liftk", "flip:<q>", "to23-3", "to23-2", "pipeline:<k>")


def run_route(route: str, f: Formula, d: Decomposition | None) -> ReductionArtifact:
    """Dispatch a CLI route name."""
    def need_d():
        if d is None:
            raise ProfileError(f"route {route} needs a decomposition")
        return d

    if route == "split4":
        return split_and_equalize(f)
    if route == "complete":
        return complete_partitions(f, need_d())
    if route == "linearize":
        return linearize(f, need_d())
    if route == "liftk":
        return lift_k(f, need_d())
    if route.startswith("flip:"):
        return flip_partitions(f, need_d(), int(route.split(":", 1)[1]))
    if route == "to23-3":
        return to_23_one_3clause(f)
    if route == "to23-2":
        return to_23_one_2clause(f, need_d())
    if route.startswith("pipeline:"):
        return pipeline(f, int(route.split(":", 1)[1]))[0]
    raise ValueError(f"unknown route {route!r}; expected one of {', '.join(ROUTES)}")
