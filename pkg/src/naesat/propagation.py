"""Learned 2-clauses, forced values, resolution and implication chains.

Learned 2-clauses use plain satisfiability semantics; nae semantics only ever
apply to the original formula. :class:`TwoClauseSet` keeps the two apart.

Internally literals are integer codes ``2*var + negated``; the public
functions translate to and from :class:`~naesat.formula.Literal`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .formula import Assignment, Formula, Literal


class TwoClauseSet:
    """An immutable set of 2-literal clauses, read as ordinary (not nae) clauses."""

    __slots__ = ("clauses",)

    def __init__(self, clauses: Iterable[Iterable[Literal]] = ()):
        out = set()
        for c in clauses:
            c = frozenset(Literal(*l) for l in c)
            if len(c) != 2 or len({l.var for l in c}) != 2:
                raise ValueError(f"{sorted(c)} is not a 2-clause over distinct variables")
            out.add(c)
        self.clauses: frozenset[frozenset[Literal]] = frozenset(out)

    def __iter__(self) -> Iterator[frozenset[Literal]]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, c) -> bool:
        return frozenset(c) in self.clauses

    def __eq__(self, other) -> bool:
        if isinstance(other, TwoClauseSet):
            return self.clauses == other.clauses
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.clauses)

    def __repr__(self) -> str:
        body = ", ".join(
            "{" + ", ".join(map(repr, sorted(c, key=lambda l: l.index))) + "}"
            for c in sorted(self.clauses, key=lambda c: sorted(l.index for l in c))
        )
        return f"TwoClauseSet({body})"

    def satisfied_by(self, a: Assignment) -> bool:
        return all(any(l.value(a) for l in c) for c in self.clauses)

    def variables(self) -> set[int]:
        return {l.var for c in self.clauses for l in c}


class ImplicationSet:
    """Directed literal graph; each clause {l, m} adds ¬l → m and ¬m → l."""

    def __init__(self, clauses: Iterable[Iterable[Literal]] = ()):
        self.edges: dict[Literal, set[Literal]] = {}
        for c in clauses:
            self.add_clause(c)

    def _edge(self, u: Literal, v: Literal) -> None:
        self.edges.setdefault(u, set()).add(v)
        self.edges.setdefault(v, set())

    def add_clause(self, clause: Iterable[Literal]) -> None:
        l, m = (Literal(*x) for x in clause)
        self._edge(~l, m)
        self._edge(~m, l)

    def successors(self, u: Literal) -> set[Literal]:
        return self.edges.get(u, set())

    def edge_list(self) -> list[tuple[Literal, Literal]]:
        return [(u, v) for u, vs in self.edges.items() for v in vs]

    def is_contrapositive_closed(self) -> bool:
        return all(~u in self.edges.get(~v, ()) for u, v in self.edge_list())

    def reaches(self, src: Literal, dst: Literal) -> bool:
        stack, seen = [src], {src}
        while stack:
            u = stack.pop()
            if u == dst:
                return True
            for v in self.edges.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False


# --- resolution -----------------------------------------------------------


class _Tautology:
    __slots__ = ()

    def __repr__(self) -> str:
        return "TAUTOLOGY"


TAUTOLOGY = _Tautology()


def resolve(c1: Iterable[Literal], c2: Iterable[Literal]):
    """Resolve two 2-clauses on a complementary pivot.

    Returns the resolvent as a frozenset (a single literal if the remainder
    collapses), or :data:`TAUTOLOGY` when the remainder is complementary.
    Raises ValueError("no pivot") when no variable occurs with opposite signs.
    """
    a = frozenset(Literal(*l) for l in c1)
    b = frozenset(Literal(*l) for l in c2)
    pivots = sorted((l for l in a if ~l in b), key=lambda l: l.index)
    if not pivots:
        raise ValueError("no pivot")
    p = pivots[0]
    rest = (a - {p}) | (b - {~p})
    if any(~l in rest for l in rest):
        return TAUTOLOGY
    return frozenset(rest)


# --- strongly connected literal classes -------------------------------------


def _tarjan(num_nodes: int, adj: list[list[int]]) -> tuple[list[int], int]:
    """Iterative Tarjan. Component ids come out in reverse topological order
    (a component's successors always have smaller ids)."""
    index = [-1] * num_nodes
    low = [0] * num_nodes
    comp = [-1] * num_nodes
    on_stack = [False] * num_nodes
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(num_nodes):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, i = work[-1]
            if i < len(adj[u]):
                work[-1] = (u, i + 1)
                v = adj[u][i]
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, 0))
                elif on_stack[v] and index[v] < low[u]:
                    low[u] = index[v]
                continue
            work.pop()
            if work:
                p = work[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == u:
                        break
                ncomp += 1
    return comp, ncomp


@dataclass(frozen=True)
class EqualClasses:
    classes: tuple[frozenset[Literal], ...]
    satisfiable: bool

    def class_of(self, l: Literal) -> frozenset[Literal]:
        for c in self.classes:
            if l in c:
                return c
        raise KeyError(l)

    def same_class(self, *lits: Literal) -> bool:
        c = self.class_of(lits[0])
        return all(l in c for l in lits[1:])


def forced_equal_classes(t: TwoClauseSet, num_vars: int = 0) -> EqualClasses:
    """Group literals that every satisfying assignment of ``t`` sets equal.

    The literal universe is both literals of every variable in ``t`` and of
    ``0..num_vars-1``. Classes are ordered by smallest literal index.
    """
    vars_ = sorted(t.variables() | set(range(num_vars)))
    local = {v: i for i, v in enumerate(vars_)}
    adj: list[list[int]] = [[] for _ in range(2 * len(vars_))]
    for c in t:
        l, m = tuple(c)
        lc = 2 * local[l.var] + l.negated
        mc = 2 * local[m.var] + m.negated
        adj[lc ^ 1].append(mc)
        adj[mc ^ 1].append(lc)
    comp, ncomp = _tarjan(len(adj), adj)
    groups: list[list[Literal]] = [[] for _ in range(ncomp)]
    for code, cid in enumerate(comp):
        groups[cid].append(Literal(vars_[code >> 1], bool(code & 1)))
    sat = all(comp[2 * i] != comp[2 * i + 1] for i in range(len(vars_)))
    classes = sorted((frozenset(g) for g in groups), key=lambda g: min(l.index for l in g))
    return EqualClasses(tuple(classes), sat)


# --- the propagation engine ----------------------------------------------------


class Engine:
    """Mutable propagation state over one formula, with an undo trail.

    Rules, applied to fixpoint:

    * a clause whose assigned literals are all equal and which has exactly
      one unassigned literal forces that literal to the other value
      (for a fully assigned clause this is a conflict);
    * clauses with one assigned literal and two unassigned literals yield
      learned 2-clauses; a literal that implies its own negation through
      them is forced false, and a literal equivalent to its negation is a
      conflict;
    * a clause whose unassigned literals all fall in one equivalence class
      (with no assigned literal to split them) is a conflict, and a 3-clause
      with two unassigned literals in one class forces the third to the
      opposite class.
    """

    def __init__(self, f: Formula):
        self.formula = f
        self.n = f.num_vars
        self.clauses = [tuple(2 * l.var + l.negated for l in c) for c in f.clauses]
        self.occ: list[list[int]] = [[] for _ in range(self.n)]
        for j, c in enumerate(self.clauses):
            for code in c:
                self.occ[code >> 1].append(j)
        self.val: list[bool | None] = [None] * self.n
        self.trail: list[int] = []
        self.learned: list[tuple[int, int]] = []
        self.learned_from: list[int] = []

    # literal helpers
    def lit_value(self, code: int) -> bool | None:
        v = self.val[code >> 1]
        return None if v is None else v != bool(code & 1)

    def set_literal(self, code: int, value: bool) -> None:
        self.val[code >> 1] = value != bool(code & 1)
        self.trail.append(code >> 1)

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.val[self.trail.pop()] = None

    def assignment(self) -> dict[int, bool]:
        return {v: b for v, b in enumerate(self.val) if b is not None}

    # rules
    def unit_fixpoint(self, pending: Iterable[int]) -> int | None:
        heap = sorted(set(pending))
        queued = set(heap)
        while heap:
            j = heapq.heappop(heap)
            queued.discard(j)
            free = None
            nfree = 0
            seen_t = seen_f = False
            for code in self.clauses[j]:
                v = self.val[code >> 1]
                if v is None:
                    nfree += 1
                    free = code
                elif v != bool(code & 1):
                    seen_t = True
                else:
                    seen_f = True
            if seen_t and seen_f:
                continue
            if nfree == 0:
                return j
            if nfree == 1 and (seen_t or seen_f):
                self.set_literal(free, not seen_t)
                for k in self.occ[free >> 1]:
                    if k not in queued:
                        queued.add(k)
                        heapq.heappush(heap, k)
        return None

    def learn(self) -> None:
        learned = []
        origin = []
        for j, c in enumerate(self.clauses):
            if len(c) != 3:
                continue
            assigned = [code for code in c if self.val[code >> 1] is not None]
            if len(assigned) != 1:
                continue
            a, b = (code for code in c if self.val[code >> 1] is None)
            if self.lit_value(assigned[0]):
                learned.append((a ^ 1, b ^ 1))
            else:
                learned.append((a, b))
            origin.append(j)
        self.learned = learned
        self.learned_from = origin

    def analyze(self) -> tuple[int | None, list[int]]:
        """Chain analysis over the current learned set.

        Returns (conflict clause index or None, literal codes forced true).
        """
        self.learn()
        extra: list[tuple[int, int]] = []
        extra_from: list[int] = []
        derived: set[tuple[int, int]] = set()
        while True:
            pairs = self.learned + extra
            origins = self.learned_from + extra_from
            nodes: dict[int, int] = {}
            for a, b in pairs:
                for code in (a, b, a ^ 1, b ^ 1):
                    if code not in nodes:
                        nodes[code] = len(nodes)
            adj: list[list[int]] = [[] for _ in nodes]
            for a, b in pairs:
                adj[nodes[a ^ 1]].append(nodes[b])
                adj[nodes[b ^ 1]].append(nodes[a])
            comp, ncomp = _tarjan(len(nodes), adj)

            def cls(code: int) -> int | None:
                i = nodes.get(code)
                return None if i is None else comp[i]

            for (a, b), j in zip(pairs, origins):
                for code in (a, b):
                    if cls(code) == cls(code ^ 1):
                        return j, []

            new = False
            for j, c in enumerate(self.clauses):
                free = [code for code in c if self.val[code >> 1] is None]
                if len(free) < 2:
                    continue
                assigned = [self.lit_value(code) for code in c if self.val[code >> 1] is not None]
                if assigned and len(set(assigned)) > 1:
                    continue
                ids = [cls(code) for code in free]
                if None in ids:
                    continue
                if not assigned and len(set(ids)) == 1:
                    return j, []
                if len(c) == 3 and not assigned:
                    for x, y, z in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
                        if ids[x] == ids[y]:
                            # z must differ from x: z ≡ ¬x
                            for pair in ((free[z], free[x]), (free[z] ^ 1, free[x] ^ 1)):
                                key = tuple(sorted(pair))
                                if key not in derived:
                                    derived.add(key)
                                    extra.append(key)
                                    extra_from.append(j)
                                    new = True
            if not new:
                break

        # condensation reachability as bitsets; ids are reverse-topological
        succ: list[set[int]] = [set() for _ in range(ncomp)]
        for u in range(len(nodes)):
            for w in adj[u]:
                if comp[w] != comp[u]:
                    succ[comp[u]].add(comp[w])
        reach = [0] * ncomp
        for cid in range(ncomp):
            r = 1 << cid
            for s in succ[cid]:
                r |= reach[s]
            reach[cid] = r
        forced: list[int] = []
        for code, i in nodes.items():
            if code & 1 or self.val[code >> 1] is not None:
                continue
            pos, neg = comp[i], comp[nodes[code ^ 1]]
            to_neg = bool(reach[pos] >> neg & 1)
            to_pos = bool(reach[neg] >> pos & 1)
            if to_neg and to_pos:
                return self.learned_from[0] if self.learned_from else 0, []
            if to_neg:
                forced.append(code ^ 1)
            elif to_pos:
                forced.append(code)
        return None, forced

    def propagate(self, pending: Iterable[int] | None = None, chains: bool = True) -> int | None:
        """Run all rules to fixpoint; return a conflicting clause index or None."""
        if pending is None:
            pending = range(len(self.clauses))
        while True:
            conflict = self.unit_fixpoint(pending)
            if conflict is not None or not chains:
                return conflict
            conflict, forced = self.analyze()
            if conflict is not None:
                return conflict
            if not forced:
                return None
            touched = set()
            for code in forced:
                if self.val[code >> 1] is None:
                    self.set_literal(code, True)
                    touched.update(self.occ[code >> 1])
            pending = touched


def _code_to_literal(code: int) -> Literal:
    return Literal(code >> 1, bool(code & 1))


def learn_two_clauses(f: Formula, a: Assignment) -> TwoClauseSet:
    """2-clauses implied by 3-clauses with exactly one assigned variable."""
    e = Engine(f)
    for v, b in a.items():
        e.val[v] = bool(b)
    e.learn()
    return TwoClauseSet((_code_to_literal(x), _code_to_literal(y)) for x, y in e.learned)


@dataclass(frozen=True)
class PropagationResult:
    assignment: dict[int, bool]
    learned: TwoClauseSet
    conflict: int | None = None
    forced: dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.conflict is None


def propagate(f: Formula, a: Assignment) -> PropagationResult:
    """Extend ``a`` with every value forced by the rules of :class:`Engine`."""
    e = Engine(f)
    for v, b in a.items():
        e.val[v] = bool(b)
    conflict = e.propagate()
    ext = e.assignment()
    forced = {v: b for v, b in ext.items() if v not in a}
    if conflict is not None:
        learned = TwoClauseSet()
    else:
        e.learn()
        learned = TwoClauseSet((_code_to_literal(x), _code_to_literal(y)) for x, y in e.learned)
    return PropagationResult(ext, learned, conflict, forced)
