"""Positive NAE-3-Sat as bicolorability of 3-uniform hypergraphs.

Vertices are variables, edges are clauses, and a decomposition into
partitions becomes a decomposition into perfect matchings. Color 1 is T,
color 2 is F.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import Assignment, Clause, Decomposition, Formula, Literal, validate


class MatchingKind(enum.Enum):
    NOT_MATCHING = "not-matching"
    MATCHING = "matching"
    PERFECT = "perfect-matching"


@dataclass(frozen=True)
class Hypergraph:
    num_vertices: int
    edges: tuple[frozenset[int], ...]
    matchings: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        for e in self.edges:
            if any(not 0 <= v < self.num_vertices for v in e):
                raise ValueError(f"edge {sorted(e)} has a vertex outside 0..{self.num_vertices - 1}")
        if self.matchings is not None:
            object.__setattr__(self, "matchings", tuple(tuple(m) for m in self.matchings))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def is_uniform(self, r: int = 3) -> bool:
        return all(len(e) == r for e in self.edges)


def formula_to_hypergraph(f: Formula, d: Decomposition | None = None) -> Hypergraph:
    """Edges in clause order. Blocks become matchings only when each block is
    a partition of the vertices; otherwise they are dropped with a warning."""
    for j, c in enumerate(f.clauses):
        if not c.positive:
            raise ValueError(f"clause {j} has a negative literal: {f.describe(j)}")
        if len(c) != 3:
            raise ValueError(f"clause {j} has {len(c)} literals, expected 3")
    edges = tuple(frozenset(c.variables) for c in f.clauses)
    matchings = None
    if d is not None:
        report = validate(f, d)
        if all(report.decomposition_valid) and report.blocks_pairwise_clause_disjoint:
            matchings = tuple(d.blocks)
        else:
            warnings.warn("decomposition is not a set of partitions; matchings dropped", stacklevel=2)
    return Hypergraph(f.num_vars, edges, matchings)


def hypergraph_to_formula(h: Hypergraph) -> tuple[Formula, Decomposition | None]:
    clauses = tuple(Clause(Literal(v) for v in sorted(e)) for e in h.edges)
    f = Formula(h.num_vertices, clauses)
    return f, (Decomposition(h.matchings) if h.matchings is not None else None)


def check_matching(h: Hypergraph, group: Sequence[int]) -> MatchingKind:
    seen: set[int] = set()
    disjoint = True
    for j in group:
        if not 0 <= j < h.num_edges:
            raise IndexError(f"edge index {j} out of range 0..{h.num_edges - 1}")
        e = h.edges[j]
        if seen & e:
            disjoint = False
        seen |= e
    if not disjoint or len(set(group)) != len(group):
        return MatchingKind.NOT_MATCHING
    if len(seen) == h.num_vertices:
        return MatchingKind.PERFECT
    return MatchingKind.MATCHING


def coloring_from_assignment(a: Assignment) -> dict[int, int]:
    return {v: 1 if value else 2 for v, value in a.items()}


def assignment_from_coloring(c: Mapping[int, int]) -> dict[int, bool]:
    out = {}
    for v, color in c.items():
        if color not in (1, 2):
            raise ValueError(f"vertex {v} has color {color}; expected 1 or 2")
        out[v] = color == 1
    return out


def monochromatic_edges(h: Hypergraph, c: Mapping[int, int]) -> list[int]:
    missing = [v for v in range(h.num_vertices) if v not in c]
    if missing:
        raise ValueError(f"coloring misses vertex {missing[0]}")
    return [j for j, e in enumerate(h.edges) if len({c[v] for v in e}) == 1]


def is_bicolored(h: Hypergraph, c: Mapping[int, int]) -> bool:
    return not monochromatic_edges(h, c)
