"""Complete decision procedures for nae-satisfiability.

``solve_exhaustive`` and ``count_solutions`` enumerate truth tables with
numpy and act as the oracle; ``solve_backtracking`` is a propagation-guided
search that scales to reduced instances with a few hundred variables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formula import Decomposition, Formula, Profile, ProfileError, nae_eval, validate
from .propagation import Engine

DEFAULT_CAP = 30
_CHUNK = 1 << 16

ALWAYS_SATISFIABLE = "always-satisfiable"
POLY_TIME_PER_LITERATURE = "poly-time-decidable-per-literature"


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    satisfiable: bool
    witness: dict[int, bool] | None = None
    nodes: int = 0
    assignments_tested: int = 0
    guarantee: str | None = None

    def __bool__(self) -> bool:
        return self.satisfiable


def _check_cap(f: Formula, cap: int) -> None:
    if f.num_vars > cap:
        raise CapExceeded(
            f"{f.num_vars} variables exceeds the exhaustive cap of {cap}; use solve_backtracking"
        )


def _nae_mask(f: Formula, bits: np.ndarray) -> np.ndarray:
    """bits[v] is the truth-value row of variable v; returns the nae mask."""
    ok = np.ones(bits.shape[1], dtype=bool)
    for c in f.clauses:
        any_t = np.zeros_like(ok)
        any_f = np.zeros_like(ok)
        for l in c:
            row = ~bits[l.var] if l.negated else bits[l.var]
            any_t |= row
            any_f |= ~row
        ok &= any_t & any_f
    return ok


def _bits(n: int, free: int, start: int, stop: int) -> np.ndarray:
    """Rows for the last ``free`` of ``n`` variables over indices [start, stop).

    Index bit (free-1-j) belongs to variable n-free+j; a 0 bit means T, so
    ascending indices visit assignments in lexicographic order with T < F.
    """
    idx = np.arange(start, stop, dtype=np.uint64)
    rows = np.ones((n, stop - start), dtype=bool)
    for j in range(free):
        shift = np.uint64(free - 1 - j)
        rows[n - free + j] = ((idx >> shift) & np.uint64(1)) == 0
    return rows


def solve_exhaustive(f: Formula, cap: int = DEFAULT_CAP) -> SolveResult:
    """Enumerate with the first variable fixed to T (flip symmetry).

    Returns the lexicographically lowest witness (T before F) or
    unsatisfiable.
    """
    _check_cap(f, cap)
    n = f.num_vars
    if n == 0:
        return SolveResult(True, {}, assignments_tested=1)
    free = n - 1
    total = 1 << free
    tested = 0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        ok = _nae_mask(f, _bits(n, free, start, stop))
        hits = np.flatnonzero(ok)
        if hits.size:
            i = start + int(hits[0])
            tested += int(hits[0]) + 1
            witness = {0: True}
            for j in range(free):
                witness[1 + j] = not (i >> (free - 1 - j)) & 1
            assert nae_eval(f, witness), "exhaustive witness failed verification"
            return SolveResult(True, witness, assignments_tested=tested)
        tested += stop - start
    return SolveResult(False, assignments_tested=tested)


def solve_unfolded(f: Formula, cap: int = DEFAULT_CAP) -> SolveResult:
    """Plain enumeration of all 2^n assignments; used to check the fold."""
    _check_cap(f, cap)
    n = f.num_vars
    total = 1 << n
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        hits = np.flatnonzero(_nae_mask(f, _bits(n, n, start, stop)))
        if hits.size:
            i = start + int(hits[0])
            witness = {j: not (i >> (n - 1 - j)) & 1 for j in range(n)}
            return SolveResult(True, witness, assignments_tested=i + 1)
    return SolveResult(False, assignments_tested=total)


def count_solutions(f: Formula, cap: int = DEFAULT_CAP) -> int:
    """Exact number of nae-satisfying assignments among all 2^n."""
    _check_cap(f, cap)
    n = f.num_vars
    total = 1 << n
    count = 0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        count += int(np.count_nonzero(_nae_mask(f, _bits(n, n, start, stop))))
    return count


def _pick(e: Engine) -> int | None:
    """Most occurrences in open clauses with exactly one assigned variable;
    fall back to most occurrences in open clauses; ties by lowest index."""
    score = [0] * e.n
    fallback = [0] * e.n
    any_open = False
    for c in e.clauses:
        vals = [e.val[code >> 1] for code in c]
        lits = {v != bool(code & 1) for code, v in zip(c, vals) if v is not None}
        if len(lits) == 2:
            continue
        nassigned = sum(v is not None for v in vals)
        for code, v in zip(c, vals):
            if v is None:
                any_open = True
                fallback[code >> 1] += 1
                if nassigned == 1:
                    score[code >> 1] += 1
    if not any_open:
        return None
    best = max(range(e.n), key=lambda v: (e.val[v] is None, score[v], fallback[v], -v))
    return best if e.val[best] is None else None


def _values(e: Engine, var: int) -> list[bool]:
    """Try first the value that nae-satisfies more of the variable's open
    clauses that already hold one assigned literal; ties try T first."""
    gain = [0, 0]  # F, T
    for j in e.occ[var]:
        mine = None
        seen = set()
        for code in e.clauses[j]:
            if code >> 1 == var:
                mine = code
            else:
                v = e.lit_value(code)
                if v is not None:
                    seen.add(v)
        if len(seen) == 1:
            (b,) = seen
            # the literal must take the other value: var = (not b) xor negated
            gain[(not b) != bool(mine & 1)] += 1
    return [True, False] if gain[1] >= gain[0] else [False, True]


def solve_backtracking(f: Formula, chains: bool = True) -> SolveResult:
    """Complete DFS with propagation after every decision.

    ``chains=False`` drops the implication-chain analysis and keeps only the
    forcing rule; the search stays complete either way.
    """
    e = Engine(f)
    nodes = 0
    if e.propagate(chains=chains) is not None:
        return SolveResult(False, nodes=nodes)
    # frames: [trail mark, variable, untried values]
    frames: list[list] = []
    while True:
        var = _pick(e)
        if var is None:
            witness = e.assignment()
            for v in range(f.num_vars):
                witness.setdefault(v, True)
            assert nae_eval(f, witness), "backtracking witness failed verification"
            return SolveResult(True, witness, nodes=nodes)
        # nothing assigned yet: flip symmetry lets the first decision be T only
        values = [True] if not e.trail else _values(e, var)
        frames.append([len(e.trail), var, values])
        while frames:
            mark, var, values = frames[-1]
            e.undo(mark)
            if not values:
                frames.pop()
                continue
            value = values.pop(0)
            nodes += 1
            e.val[var] = value
            e.trail.append(var)
            if e.propagate(pending=e.occ[var], chains=chains) is None:
                break
        else:
            return SolveResult(False, nodes=nodes)


def decide_k_disjoint(f: Formula, d: Decomposition, k: int) -> SolveResult:
    """Decide a Positive k-Disjoint E-k instance, tagging what is known about k.

    For k in {1, 2} every such instance has fewer clauses than variables and
    is nae-satisfiable; a missing witness there is an internal error.
    """
    report = validate(f, d, Profile.positive_k_disjoint(k))
    if not report.passed:
        raise ProfileError(f"not a Positive {k}-Disjoint E{k} instance: {report.failure}")
    result = solve_backtracking(f)
    if k in (1, 2):
        if not result.satisfiable:
            raise AssertionError(f"{k}-disjoint instance reported unsatisfiable")
        guarantee = ALWAYS_SATISFIABLE
    elif k == 3:
        guarantee = POLY_TIME_PER_LITERATURE
    else:
        guarantee = None
    return SolveResult(result.satisfiable, result.witness, result.nodes, guarantee=guarantee)
