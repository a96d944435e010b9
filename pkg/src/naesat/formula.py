"""Formulas, literals, decompositions and structural validation.

Variables are dense 0-based integers. Display names live in a side table on
the :class:`Formula` and only matter for I/O.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

Assignment = Mapping[int, bool]


class Literal(NamedTuple):
    var: int
    negated: bool = False

    def __invert__(self) -> "Literal":
        return Literal(self.var, not self.negated)

    @property
    def index(self) -> int:
        """Dense literal index: ``2*var`` for ``x``, ``2*var + 1`` for ``¬x``."""
        return 2 * self.var + int(self.negated)

    def value(self, assignment: Assignment) -> bool | None:
        v = assignment.get(self.var)
        if v is None:
            return None
        return v != self.negated

    def __repr__(self) -> str:
        return f"{'-' if self.negated else ''}x{self.var}"


def lit(var: int, negated: bool = False) -> Literal:
    return Literal(var, negated)


class Clause:
    """A clause: literal order kept for display, ignored for equality."""

    __slots__ = ("literals", "key")

    def __init__(self, literals: Iterable[Literal]):
        lits = tuple(Literal(*l) for l in literals)
        if not lits:
            raise ValueError("empty clause")
        if len({l.var for l in lits}) != len(lits):
            raise ValueError(f"clause {lits} repeats a variable")
        self.literals = lits
        self.key = frozenset(lits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Clause) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.literals)) + "}"

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(l.var for l in self.literals)

    @property
    def positive(self) -> bool:
        return not any(l.negated for l in self.literals)

    def sorted_literals(self) -> tuple[Literal, ...]:
        return tuple(sorted(self.literals, key=lambda l: l.var))


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()
    var_names: tuple[str, ...] | None = None

    def __post_init__(self):
        clauses = tuple(c if isinstance(c, Clause) else Clause(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        seen: dict[Clause, int] = {}
        for j, c in enumerate(clauses):
            if len(c) not in (2, 3):
                raise ValueError(f"clause {j} has {len(c)} literals; only 2- and 3-clauses are supported")
            for l in c:
                if not 0 <= l.var < self.num_vars:
                    raise ValueError(f"clause {j} uses variable {l.var} outside 0..{self.num_vars - 1}")
            if c in seen:
                raise ValueError(f"clause {j} duplicates clause {seen[c]}")
            seen[c] = j
        if self.var_names is not None:
            names = tuple(self.var_names)
            if len(names) != self.num_vars:
                raise ValueError("var_names must name every variable")
            object.__setattr__(self, "var_names", names)

    def __eq__(self, other) -> bool:
        # names are display-only
        return (
            isinstance(other, Formula)
            and self.num_vars == other.num_vars
            and self.clauses == other.clauses
        )

    def __hash__(self) -> int:
        return hash((self.num_vars, self.clauses))

    def __len__(self) -> int:
        return len(self.clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def name(self, var: int) -> str:
        if self.var_names is not None:
            return self.var_names[var]
        return f"x{var + 1}"

    def describe(self, clause_index: int) -> str:
        c = self.clauses[clause_index]
        return "{" + ", ".join(("¬" if l.negated else "") + self.name(l.var) for l in c) + "}"

    @classmethod
    def from_named(
        cls, clauses: Sequence[Sequence[str]], names: Sequence[str] | None = None
    ) -> "Formula":
        """Build a formula from clauses of names; a leading ``-`` negates.

        Without ``names`` variables are numbered in order of first appearance.
        """
        order: list[str] = list(names) if names is not None else []
        index = {n: i for i, n in enumerate(order)}
        built = []
        for c in clauses:
            lits = []
            for token in c:
                neg = token.startswith("-")
                n = token[1:] if neg else token
                if n not in index:
                    if names is not None:
                        raise ValueError(f"unknown variable name {n!r}")
                    index[n] = len(order)
                    order.append(n)
                lits.append(Literal(index[n], neg))
            built.append(Clause(lits))
        return cls(len(order), tuple(built), tuple(order))

    def var_index(self, name: str) -> int:
        if self.var_names is None:
            raise ValueError("formula has no variable names")
        return self.var_names.index(name)

    def named(self, **values: bool) -> dict[int, bool]:
        """Assignment from keyword names, e.g. ``f.named(a=True, b=False)``."""
        return {self.var_index(k): v for k, v in values.items()}

    def occurrences(self) -> list[list[int]]:
        """Clause indices containing each variable, ascending."""
        occ: list[list[int]] = [[] for _ in range(self.num_vars)]
        for j, c in enumerate(self.clauses):
            for l in c:
                occ[l.var].append(j)
        return occ


@dataclass(frozen=True)
class Decomposition:
    """Clause-index blocks claimed to be partitions of the variable set.

    Blocks are stored as sorted tuples. Overlap and coverage are checked by
    :func:`validate`, not assumed.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "blocks", tuple(tuple(sorted(set(b))) for b in self.blocks)
        )

    @property
    def k(self) -> int:
        return len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.blocks[i]

    def block_of(self) -> dict[int, int]:
        """Map clause index to its (first) block index."""
        out: dict[int, int] = {}
        for b, block in enumerate(self.blocks):
            for j in block:
                out.setdefault(j, b)
        return out

    def is_index_partition(self, num_clauses: int) -> bool:
        seen = [0] * num_clauses
        for block in self.blocks:
            for j in block:
                if not 0 <= j < num_clauses:
                    return False
                seen[j] += 1
        return all(s == 1 for s in seen)


# --- evaluation ---------------------------------------------------------


@dataclass(frozen=True)
class NaeVerdict:
    violated: int | None = None

    @property
    def satisfied(self) -> bool:
        return self.violated is None

    def __bool__(self) -> bool:
        return self.violated is None


class IncompleteAssignment(ValueError):
    pass


class ProfileError(ValueError):
    """Input does not have the structure an operation requires."""


def is_total(f: Formula, a: Assignment) -> bool:
    return all(v in a for v in range(f.num_vars))


def clause_nae(clause: Clause, a: Assignment) -> bool:
    """True iff ``clause`` has both a true and a false literal under ``a``."""
    vals = {l.value(a) for l in clause}
    return vals == {True, False}


def nae_eval(f: Formula, a: Assignment) -> NaeVerdict:
    """Check nae-satisfaction; report the lowest-index violated clause."""
    missing = [v for v in range(f.num_vars) if v not in a]
    if missing:
        raise IncompleteAssignment(
            f"incomplete assignment: {len(missing)} unassigned variable(s), first {f.name(missing[0])}"
        )
    for j, c in enumerate(f.clauses):
        first = c.literals[0].value(a)
        if all(l.value(a) == first for l in c.literals[1:]):
            return NaeVerdict(j)
    return NaeVerdict()


def flip_assignment(a: Assignment) -> dict[int, bool]:
    return {v: not b for v, b in a.items()}


def appearance_counts(f: Formula) -> list[tuple[int, int]]:
    """Per variable: (unnegated appearances, negated appearances)."""
    counts = [[0, 0] for _ in range(f.num_vars)]
    for c in f.clauses:
        for l in c:
            counts[l.var][int(l.negated)] += 1
    return [tuple(pq) for pq in counts]


def is_linear(f: Formula) -> bool:
    """Every pair of distinct clauses shares at most one variable."""
    seen: set[tuple[int, int]] = set()
    for c in f.clauses:
        for pair in combinations(sorted(c.variables), 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


# --- structural profiles -------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """A conjunction of the instance properties named by problem prefixes/suffixes.

    ``blocks`` is the k of k-Disjoint: exactly k blocks covering the clause
    indices, pairwise clause-disjoint, each with at most one appearance of
    every variable. ``partitions`` additionally demands that every block
    covers every variable; ``disjoint=False`` tolerates blocks that share a
    clause. ``exact`` is the E-k suffix. ``signature`` pins
    each variable's (unnegated, negated) counts; ``size_appearances`` pins,
    per clause size, how many clauses of that size each variable is in.
    """

    name: str
    clause_sizes: frozenset[int] = frozenset({3})
    positive: bool = False
    linear: bool = False
    blocks: int | None = None
    disjoint: bool = True
    partitions: bool = False
    exact: int | None = None
    signature: tuple[int, int] | None = None
    size_appearances: tuple[tuple[int, int], ...] | None = None

    @classmethod
    def positive_e(cls, k: int) -> "Profile":
        return cls(f"Positive NAE-3-Sat-E{k}", positive=True, exact=k)

    @classmethod
    def positive_k_disjoint(cls, k: int, linear: bool = False) -> "Profile":
        name = f"Positive {'Linear ' if linear else ''}{k}-Disjoint NAE-3-Sat-E{k}"
        return cls(name, positive=True, linear=linear, blocks=k, partitions=True, exact=k)

    @classmethod
    def linear_pq(cls, p: int, q: int) -> "Profile":
        return cls(f"Linear NAE-3-Sat ({p},{q})", linear=True, signature=(p, q), exact=p + q)

    @classmethod
    def two_three_one_3clause(cls) -> "Profile":
        return cls(
            "Positive Linear 3-Disjoint NAE-(2,3)-Sat-E3, one 3-clause per variable",
            clause_sizes=frozenset({2, 3}), positive=True, linear=True, blocks=3,
            partitions=True, exact=3, size_appearances=((2, 2), (3, 1)),
        )

    @classmethod
    def two_three_one_2clause(cls) -> "Profile":
        return cls(
            "Positive Linear 3-Disjoint NAE-(2,3)-Sat-E3, one 2-clause per variable",
            clause_sizes=frozenset({2, 3}), positive=True, linear=True, blocks=3,
            partitions=True, exact=3, size_appearances=((2, 1), (3, 2)),
        )

    @classmethod
    def parse(cls, text: str) -> "Profile":
        """Parse a CLI profile name.

        Accepted: ``positive-e<K>``, ``positive-<K>-disjoint-e<K>``,
        ``positive-linear-<K>-disjoint-e<K>``, ``linear-pq:<P>,<Q>``,
        ``two-three-one-3clause``, ``two-three-one-2clause``.
        """
        t = text.strip().lower()
        try:
            if t == "two-three-one-3clause":
                return cls.two_three_one_3clause()
            if t == "two-three-one-2clause":
                return cls.two_three_one_2clause()
            if t.startswith("linear-pq:"):
                p, q = t.split(":", 1)[1].split(",")
                return cls.linear_pq(int(p), int(q))
            parts = t.split("-")
            if parts[0] == "positive" and len(parts) == 2 and parts[1].startswith("e"):
                return cls.positive_e(int(parts[1][1:]))
            if parts[0] == "positive":
                linear = parts[1] == "linear"
                rest = parts[2:] if linear else parts[1:]
                if len(rest) == 3 and rest[1] == "disjoint" and rest[2] == f"e{rest[0]}":
                    return cls.positive_k_disjoint(int(rest[0]), linear=linear)
        except (ValueError, IndexError):
            pass
        raise ValueError(f"unknown profile {text!r}")


@dataclass(frozen=True)
class BlockReport:
    variable_disjoint: bool
    covers: bool
    uncovered: tuple[int, ...]

    @property
    def is_partition(self) -> bool:
        return self.variable_disjoint and self.covers


@dataclass(frozen=True)
class StructureReport:
    num_vars: int
    num_clauses: int
    positive: bool
    linear: bool
    clause_size_profile: tuple[tuple[int, int], ...]
    appearance_counts: tuple[tuple[int, int], ...]
    size_appearances: tuple[tuple[tuple[int, int], ...], ...]
    decomposition_valid: tuple[bool, ...] | None = None
    blocks: tuple[BlockReport, ...] | None = None
    blocks_cover_clauses: bool | None = None
    blocks_pairwise_clause_disjoint: bool | None = None
    profile: str | None = None
    failure: str | None = None

    @property
    def passed(self) -> bool | None:
        """Profile verdict; None when no profile was requested."""
        if self.profile is None:
            return None
        return self.failure is None

    def lines(self) -> list[str]:
        sizes = ", ".join(f"{s}:{n}" for s, n in self.clause_size_profile) or "-"
        out = [
            f"variables\t{self.num_vars}",
            f"clauses\t{self.num_clauses}",
            f"clause sizes\t{sizes}",
            f"positive\t{self.positive}",
            f"linear\t{self.linear}",
        ]
        totals = sorted({p + q for p, q in self.appearance_counts})
        out.append("appearances per variable\t" + (",".join(map(str, totals)) or "-"))
        if self.blocks is not None:
            out.append(f"blocks\t{len(self.blocks)}")
            out.append(f"blocks cover clauses\t{self.blocks_cover_clauses}")
            out.append(f"blocks pairwise clause-disjoint\t{self.blocks_pairwise_clause_disjoint}")
            for b, br in enumerate(self.blocks, 1):
                out.append(
                    f"block {b}\tpartition={br.is_partition} variable-disjoint={br.variable_disjoint}"
                    f" uncovered={len(br.uncovered)}"
                )
        if self.profile is not None:
            verdict = "PASS" if self.failure is None else f"FAIL ({self.failure})"
            out.append(f"profile {self.profile}\t{verdict}")
        return out


def _block_report(f: Formula, block: Sequence[int]) -> BlockReport:
    count = [0] * f.num_vars
    for j in block:
        for v in f.clauses[j].variables:
            count[v] += 1
    return BlockReport(
        variable_disjoint=all(c <= 1 for c in count),
        covers=all(c >= 1 for c in count),
        uncovered=tuple(v for v, c in enumerate(count) if c == 0),
    )


def validate(
    f: Formula, d: Decomposition | None = None, profile: Profile | None = None
) -> StructureReport:
    """Compute every structural property of ``(f, d)``; optionally judge a profile.

    Raises ValueError if a block refers to a clause index out of range.
    """
    sizes = Counter(len(c) for c in f.clauses)
    pq = appearance_counts(f)
    per_size = [Counter() for _ in range(f.num_vars)]
    for c in f.clauses:
        for v in c.variables:
            per_size[v][len(c)] += 1

    fields: dict = dict(
        num_vars=f.num_vars,
        num_clauses=f.num_clauses,
        positive=all(c.positive for c in f.clauses),
        linear=is_linear(f),
        clause_size_profile=tuple(sorted(sizes.items())),
        appearance_counts=tuple(pq),
        size_appearances=tuple(tuple(sorted(c.items())) for c in per_size),
    )
    if d is not None:
        for b, block in enumerate(d.blocks):
            for j in block:
                if not 0 <= j < f.num_clauses:
                    raise ValueError(f"block {b + 1} refers to clause {j}, out of range 0..{f.num_clauses - 1}")
        reports = tuple(_block_report(f, block) for block in d.blocks)
        covered = set().union(*map(set, d.blocks)) if d.blocks else set()
        block_sets = [frozenset(f.clauses[j] for j in block) for block in d.blocks]
        disjoint = all(not (a & b) for a, b in combinations(block_sets, 2))
        fields.update(
            decomposition_valid=tuple(r.is_partition for r in reports),
            blocks=reports,
            blocks_cover_clauses=len(covered) == f.num_clauses,
            blocks_pairwise_clause_disjoint=disjoint,
        )
    report = StructureReport(**fields)
    if profile is None:
        return report
    failure = _first_failure(report, d, profile)
    return StructureReport(**fields, profile=profile.name, failure=failure)


def _first_failure(r: StructureReport, d: Decomposition | None, p: Profile) -> str | None:
    bad_sizes = [s for s, _ in r.clause_size_profile if s not in p.clause_sizes]
    if bad_sizes:
        return f"clause size {bad_sizes[0]} not in {sorted(p.clause_sizes)}"
    if p.positive and not r.positive:
        return "positive"
    if p.signature is not None:
        for v, pq in enumerate(r.appearance_counts):
            if pq != p.signature:
                return f"signature: variable {v} has (p,q)={pq}, expected {p.signature}"
    if p.exact is not None:
        for v, (a, b) in enumerate(r.appearance_counts):
            if a + b != p.exact:
                return f"E{p.exact}: variable {v} appears {a + b} times"
    if p.size_appearances is not None:
        want = tuple(sorted(p.size_appearances))
        for v, got in enumerate(r.size_appearances):
            if got != want:
                return f"size appearances: variable {v} has {dict(got)}, expected {dict(want)}"
    if p.linear and not r.linear:
        return "linear"
    if p.blocks is not None:
        if d is None:
            return f"{p.blocks}-disjoint: no decomposition given"
        if len(r.blocks) != p.blocks:
            return f"{p.blocks}-disjoint: decomposition has {len(r.blocks)} blocks"
        if not r.blocks_cover_clauses:
            return f"{p.blocks}-disjoint: blocks do not cover every clause"
        if p.disjoint and not r.blocks_pairwise_clause_disjoint:
            return f"{p.blocks}-disjoint: blocks share a clause"
        for b, br in enumerate(r.blocks, 1):
            if not br.variable_disjoint:
                return f"{p.blocks}-disjoint: block {b} repeats a variable"
        if p.partitions:
            for b, br in enumerate(r.blocks, 1):
                if not br.covers:
                    return f"partition: block {b} misses variable {br.uncovered[0]}"
    return None
