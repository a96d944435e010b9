"""The ``p nae`` instance format, the hypergraph edge-list format and the
provenance sidecar.

Instance format::

    c comment
    p nae <num_vars> <num_clauses> <num_blocks>
    n <index> <name>
    <block-tag> <lit> <lit> [<lit>] 0

Literals are signed one-based variable indices; tag 0 means the clause is in
no block (only allowed when num_blocks is 0 in strict mode). Indices are
zero-based everywhere else in the package.
"""

from __future__ import annotations

import re
from typing import Iterator, Sequence

from .formula import Clause, Decomposition, Formula, Literal
from .hypergraph import Hypergraph
from .reductions import Origin

MAX_VARS = 10_000_000
_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _decode(data: str | bytes) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        head = data[: e.start]
        line = head.count(b"\n") + 1
        column = e.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError("invalid utf-8", line, column) from None


def _lines(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """(line number, [(column, token)]) for every non-blank, non-comment line."""
    for no, raw in enumerate(text.split("\n"), 1):
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(raw)]
        if not toks or toks[0][1] == "c":
            continue
        yield no, toks


def _int(tok: tuple[int, str], line: int, what: str) -> int:
    col, s = tok
    if not re.fullmatch(r"[+-]?\d{1,19}", s):
        raise ParseError(f"expected {what}, got {s[:20]!r}", line, col)
    return int(s)


def _count(tok, line: int, what: str) -> int:
    v = _int(tok, line, what)
    if v < 0:
        raise ParseError(f"{what} must be non-negative", line, tok[0])
    return v


def parse(data: str | bytes, strict: bool = True) -> tuple[Formula, Decomposition | None]:
    """Parse an instance; any malformed input raises ParseError with a location.

    Lenient mode (``strict=False``) accepts count mismatches, merges
    duplicate clauses and grows the variable count to fit the body.
    """
    text = _decode(data)
    header = None
    names: dict[int, str] = {}
    records: list[tuple[int, int, tuple[Literal, ...]]] = []  # line, tag, literals
    for no, toks in _lines(text):
        head = toks[0][1]
        if header is None:
            if head != "p":
                raise ParseError("expected header 'p nae <vars> <clauses> <blocks>'", no, toks[0][0])
            if len(toks) != 5 or toks[1][1] != "nae":
                raise ParseError("header must be 'p nae <vars> <clauses> <blocks>'", no, toks[0][0])
            nv = _count(toks[2], no, "variable count")
            nc = _count(toks[3], no, "clause count")
            nb = _count(toks[4], no, "block count")
            if nv > MAX_VARS:
                raise ParseError(f"variable count above {MAX_VARS}", no, toks[2][0])
            header = (no, nv, nc, nb)
            continue
        _, nv, nc, nb = header
        if head == "p":
            raise ParseError("second header", no, toks[0][0])
        if head == "n":
            if len(toks) != 3:
                raise ParseError("name line must be 'n <index> <name>'", no, toks[0][0])
            idx = _int(toks[1], no, "variable index")
            if not 1 <= idx <= nv and (strict or not 1 <= idx <= MAX_VARS):
                raise ParseError(f"variable {idx} out of range 1..{nv}", no, toks[1][0])
            if idx in names:
                raise ParseError(f"variable {idx} named twice", no, toks[1][0])
            names[idx] = toks[2][1]
            continue
        tag = _count(toks[0], no, "block tag")
        if tag > nb:
            raise ParseError(f"block tag {tag} out of range 0..{nb}", no, toks[0][0])
        if strict and nb and tag == 0:
            raise ParseError("clause has no block tag", no, toks[0][0])
        lits: list[Literal] = []
        seen: set[int] = set()
        for i, tok in enumerate(toks[1:], 1):
            v = _int(tok, no, "literal")
            if v == 0:
                if i != len(toks) - 1:
                    raise ParseError("tokens after terminating 0", no, toks[i + 1][0])
                break
            var = abs(v)
            if var > nv and (strict or var > MAX_VARS):
                raise ParseError(f"variable {var} out of range 1..{nv}", no, tok[0])
            if var in seen:
                raise ParseError(f"variable {var} repeated in clause", no, tok[0])
            seen.add(var)
            lits.append(Literal(var - 1, v < 0))
        else:
            raise ParseError("clause line must end with 0", no, toks[-1][0])
        if len(lits) not in (2, 3):
            raise ParseError(f"clause has {len(lits)} literals, expected 2 or 3", no, toks[0][0])
        records.append((no, tag, tuple(lits)))

    if header is None:
        raise ParseError("missing header", text.count("\n") + 1, 1)
    hno, nv, nc, nb = header
    if strict and len(records) != nc:
        raise ParseError(f"header declares {nc} clauses, body has {len(records)}", hno, 1)
    if not strict:
        used = [l.var + 1 for _, _, lits in records for l in lits]
        nv = max([nv, *used, *names])

    index: dict[Clause, int] = {}
    clauses: list[Clause] = []
    blocks: list[list[int]] = [[] for _ in range(nb)]
    for no, tag, lits in records:
        c = Clause(lits)
        if c in index:
            if strict:
                raise ParseError(f"duplicate of clause {index[c] + 1}", no, 1)
            j = index[c]
        else:
            j = index[c] = len(clauses)
            clauses.append(c)
        if tag:
            blocks[tag - 1].append(j)

    var_names = None
    if names:
        var_names = tuple(names.get(v + 1, f"x{v + 1}") for v in range(nv))
    f = Formula(nv, tuple(clauses), var_names)
    return f, (Decomposition(blocks) if nb else None)


def serialize(f: Formula, d: Decomposition | None = None) -> str:
    """Canonical text: clauses in index order, literals by variable."""
    tags = [0] * f.num_clauses
    if d is not None:
        if not d.is_index_partition(f.num_clauses):
            raise ValueError("the format needs every clause in exactly one block")
        for b, block in enumerate(d.blocks, 1):
            for j in block:
                tags[j] = b
    out = [f"p nae {f.num_vars} {f.num_clauses} {d.k if d is not None else 0}"]
    if f.var_names is not None:
        for v, name in enumerate(f.var_names, 1):
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"variable name {name!r} cannot be written")
            out.append(f"n {v} {name}")
    for tag, c in zip(tags, f.clauses):
        lits = " ".join(str(-(l.var + 1) if l.negated else l.var + 1) for l in c.sorted_literals())
        out.append(f"{tag} {lits} 0")
    return "\n".join(out) + "\n"


# --- hypergraph edge lists ------------------------------------------------------


def serialize_hypergraph(h: Hypergraph) -> str:
    nm = len(h.matchings) if h.matchings is not None else 0
    out = [f"h {h.num_vertices} {h.num_edges} {nm}"]
    out += [" ".join(str(v + 1) for v in sorted(e)) for e in h.edges]
    for m in h.matchings or ():
        out.append(" ".join(["m", *(str(j + 1) for j in m)]))
    return "\n".join(out) + "\n"


def parse_hypergraph(data: str | bytes) -> Hypergraph:
    text = _decode(data)
    header = None
    edges: list[frozenset[int]] = []
    matchings: list[tuple[int, ...]] = []
    for no, toks in _lines(text):
        if header is None:
            if toks[0][1] != "h" or len(toks) != 4:
                raise ParseError("header must be 'h <vertices> <edges> <matchings>'", no, toks[0][0])
            header = tuple(_count(t, no, "count") for t in toks[1:])
            if header[0] > MAX_VARS:
                raise ParseError(f"vertex count above {MAX_VARS}", no, toks[1][0])
            continue
        nv, ne, _ = header
        if toks[0][1] == "m":
            group = []
            for tok in toks[1:]:
                j = _int(tok, no, "edge index")
                if not 1 <= j <= ne:
                    raise ParseError(f"edge {j} out of range 1..{ne}", no, tok[0])
                group.append(j - 1)
            matchings.append(tuple(group))
            continue
        edge = []
        for tok in toks:
            v = _int(tok, no, "vertex")
            if not 1 <= v <= nv:
                raise ParseError(f"vertex {v} out of range 1..{nv}", no, tok[0])
            edge.append(v - 1)
        if len(set(edge)) != len(edge):
            raise ParseError("edge repeats a vertex", no, toks[0][0])
        edges.append(frozenset(edge))
    if header is None:
        raise ParseError("missing header", text.count("\n") + 1, 1)
    nv, ne, nm = header
    if len(edges) != ne:
        raise ParseError(f"header declares {ne} edges, body has {len(edges)}", 1, 1)
    if len(matchings) != nm:
        raise ParseError(f"header declares {nm} matchings, body has {len(matchings)}", 1, 1)
    return Hypergraph(nv, tuple(edges), tuple(matchings) if nm else None)


# --- provenance sidecar --------------------------------------------------------------


def serialize_provenance(provenance: Sequence[Origin]) -> str:
    """One line per target variable: ``<target> <kind> <source|-> <detail...>``,
    all indices one-based."""
    out = []
    for t, o in enumerate(provenance, 1):
        src = "-" if o.source is None else str(o.source + 1)
        out.append(" ".join([str(t), o.kind, src, *o.detail]))
    return "\n".join(out) + ("\n" if out else "")


def parse_provenance(data: str | bytes) -> tuple[Origin, ...]:
    out = []
    for no, toks in _lines(_decode(data)):
        if len(toks) < 3:
            raise ParseError("provenance line needs '<target> <kind> <source>'", no, toks[0][0])
        t = _int(toks[0], no, "target variable")
        if t != len(out) + 1:
            raise ParseError(f"expected target {len(out) + 1}", no, toks[0][0])
        src = None if toks[2][1] == "-" else _int(toks[2], no, "source variable") - 1
        out.append(Origin(toks[1][1], src, tuple(s for _, s in toks[3:])))
    return tuple(out)
