"""Finite building blocks: EQ, EQ_lin, the S(t, q) padding sets and the
canonical 12-clause no-instance, plus exhaustive checks for the gadgets.

Clause order follows the printed numbering (1-based in the text, 0-based
here), so a failing check points at the same clause number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .formula import Clause, Decomposition, Formula, Literal, clause_nae

EQ_AUX = "abcdefghi"
EQ_CLAUSES = (
    "a h x2", "b d x4", "c e i", "f g x1",
    "a g x4", "b e x3", "d i x1", "c f h",
    "a f x3", "b i x2", "e h x1", "c d g",
    "a b c", "d e f", "g h i",
)
# EQ(x, 1) .. EQ(x, 4): printed column 4, 2, 1, 3
EQ_COLUMNS = ((12, 13, 14), (4, 5, 6, 7), (0, 1, 2, 3), (8, 9, 10, 11))
# auxiliaries set equal to the interface in the constructive witness; the rest are flipped
EQ_WITNESS_TRUE = frozenset("cdh")

EQ_LIN_AUX = "abcdef"
EQ_LIN_CLAUSES = (
    "a d x3", "b e x2", "c f x4",
    "a c x1", "b d x4", "e f x3",
    "a e x4", "b f x1", "c d x2",
    "a f x2", "b c x3", "d e x1",
)
EQ_LIN_COLUMNS = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11))

PADDING_AUX = "abcdef"
PADDING_CLAUSES = (
    ("a b d", "c e f"),
    ("x1 a d", "x2 b e", "x3 c f"),
    ("y1 a e", "y2 b f", "y3 c d"),
    ("z1 a f", "z2 b d", "z3 c e"),
)
PADDING_TRUE = frozenset("abc")

NO_INSTANCE_NAMES = tuple("abcdefghi")
NO_INSTANCE_CLAUSES = (
    "a b c", "d e f", "g h i",
    "a d g", "b e i", "c f h",
    "a e h", "b f g", "c d i",
    "a f i", "b d h", "c e g",
)
NO_INSTANCE_BLOCKS = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11))


@dataclass(frozen=True)
class GadgetInstance:
    """Clauses over interface variables plus freshly allocated auxiliaries.

    ``columns`` index into ``clauses``; ``aux`` maps the printed auxiliary
    names to the allocated variables.
    """

    kind: str
    clauses: tuple[Clause, ...]
    columns: tuple[tuple[int, ...], ...]
    interface: tuple[int, ...]
    aux: dict[str, int] = field(default_factory=dict)
    interface_names: tuple[str, ...] = ()

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(dict.fromkeys(self.interface + tuple(self.aux.values())))

    def formula(self) -> tuple[Formula, Decomposition]:
        """The fragment as a standalone formula, variables renumbered
        interface first, then auxiliaries in printed order."""
        order = self.variables
        local = {v: i for i, v in enumerate(order)}
        clauses = [Clause(Literal(local[l.var], l.negated) for l in c) for c in self.clauses]
        label = dict(zip(self.aux.values(), self.aux))
        for v, name in reversed(tuple(zip(self.interface, self.interface_names))):
            label[v] = name
        names = tuple(label[v] for v in order)
        return Formula(len(order), tuple(clauses), names), Decomposition(self.columns)


def _fresh_block(fresh: Iterator[int] | None, names: str, start: int) -> dict[str, int]:
    if fresh is None:
        fresh = itertools.count(start)
    return {n: next(fresh) for n in names}


def _build(kind, rows, columns, interface, iface_names, aux) -> GadgetInstance:
    lookup = dict(zip(iface_names, interface))
    lookup.update(aux)
    clauses = tuple(Clause(Literal(lookup[t]) for t in row.split()) for row in rows)
    return GadgetInstance(kind, clauses, columns, tuple(interface), aux, tuple(iface_names))


def _check_interface(interface: Sequence[int], size: int) -> None:
    if len(interface) != size:
        raise ValueError(f"expected {size} interface variables, got {len(interface)}")
    if len(set(interface)) != size:
        raise ValueError(f"interface variables must be distinct: {tuple(interface)}")


def eq_gadget(x: Sequence[int] = (0, 1, 2, 3), fresh: Iterator[int] | None = None) -> GadgetInstance:
    """EQ(x1, x2, x3, x4): 15 clauses over 9 fresh auxiliaries a..i."""
    _check_interface(x, 4)
    aux = _fresh_block(fresh, EQ_AUX, max(x) + 1)
    return _build("EQ", EQ_CLAUSES, EQ_COLUMNS, x, ("x1", "x2", "x3", "x4"), aux)


def eq_lin_gadget(x: Sequence[int] = (0, 1, 2, 3), fresh: Iterator[int] | None = None) -> GadgetInstance:
    """EQ_lin(x1, x2, x3, x4): 12 linear clauses over 6 fresh auxiliaries a..f."""
    _check_interface(x, 4)
    aux = _fresh_block(fresh, EQ_LIN_AUX, max(x) + 1)
    return _build("EQ_lin", EQ_LIN_CLAUSES, EQ_LIN_COLUMNS, x, ("x1", "x2", "x3", "x4"), aux)


def padding_set(
    x_copies: Sequence[int] = (0, 1, 2),
    y_copies: Sequence[int] = (3, 4, 5),
    z_copies: Sequence[int] = (6, 7, 8),
    fresh: Iterator[int] | None = None,
    t: int = 1,
) -> GadgetInstance:
    """S(t, 1..4): 11 clauses over six fresh auxiliaries and nine copy slots.

    Blocks are S(t, 1) .. S(t, 4) with sizes 2, 3, 3, 3.
    """
    # the same variable may be missing from several blocks, so the x, y
    # and z families may overlap; each family is three distinct copies
    for family in (x_copies, y_copies, z_copies):
        _check_interface(family, 3)
    interface = tuple(x_copies) + tuple(y_copies) + tuple(z_copies)
    aux = _fresh_block(fresh, PADDING_AUX, max(interface) + 1)
    rows, columns = [], []
    for block in PADDING_CLAUSES:
        columns.append(tuple(range(len(rows), len(rows) + len(block))))
        rows.extend(block)
    names = tuple(f"{p}{r}" for p in "xyz" for r in (1, 2, 3))
    return _build(f"S({t})", rows, tuple(columns), interface, names, aux)


def canonical_no_instance() -> tuple[Formula, Decomposition]:
    """The 12 clauses over a..i with the four partitions C1..C4."""
    f = Formula.from_named([row.split() for row in NO_INSTANCE_CLAUSES], NO_INSTANCE_NAMES)
    return f, Decomposition(NO_INSTANCE_BLOCKS)


# --- exhaustive verification ------------------------------------------------


def extensions(g: GadgetInstance, interface_values: Sequence[bool]) -> list[dict[str, bool]]:
    """All auxiliary assignments that nae-satisfy every clause of ``g`` given
    the interface values, each keyed by printed auxiliary name."""
    base = dict(zip(g.interface, interface_values))
    names = list(g.aux)
    found = []
    for values in itertools.product((True, False), repeat=len(names)):
        a = dict(base)
        a.update((g.aux[n], v) for n, v in zip(names, values))
        if all(clause_nae(c, a) for c in g.clauses):
            found.append(dict(zip(names, values)))
    return found


@dataclass(frozen=True)
class GadgetRow:
    interface: tuple[bool, ...]
    extensions: tuple[dict[str, bool], ...]

    @property
    def all_equal(self) -> bool:
        return len(set(self.interface)) == 1

    @property
    def exists(self) -> bool:
        return bool(self.extensions)

    @property
    def ok(self) -> bool:
        return self.exists == self.all_equal


@dataclass(frozen=True)
class GadgetVerification:
    kind: str
    rows: tuple[GadgetRow, ...]
    evaluations: int

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list[str]:
        out = []
        for r in self.rows:
            if r.ok:
                continue
            bits = "".join("T" if v else "F" for v in r.interface)
            if r.all_equal:
                out.append(f"{bits}: all-equal interface has no extension (if-direction)")
            else:
                out.append(f"{bits}: unequal interface extends (only-if direction)")
        return out


def verify_equality_gadget(g: GadgetInstance) -> GadgetVerification:
    """Check, over all 16 interface rows, that an extension exists exactly
    when the four interface variables agree."""
    if len(g.interface) != 4:
        raise ValueError("equality gadgets have four interface variables")
    rows = []
    for values in itertools.product((True, False), repeat=4):
        rows.append(GadgetRow(values, tuple(extensions(g, values))))
    evaluations = 16 * (1 << len(g.aux))
    return GadgetVerification(g.kind, tuple(rows), evaluations)
