"""Seeded random instances: unions of k random partitions of V into triples.

Randomness comes from ``random.Random(seed)`` (Mersenne Twister); a random
partition is ``shuffle`` (Fisher-Yates) followed by consecutive triples.
Linearity and block disjointness are enforced by rejection: a block that
clashes with the blocks already drawn is redrawn, and after too many
consecutive clashes the whole instance restarts. Every draw counts against
``max_rejections``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .formula import Clause, Decomposition, Formula, Literal, Profile, validate

DEFAULT_MAX_REJECTIONS = 10_000
_RESTART_AFTER = 500


class GenerationError(RuntimeError):
    def __init__(self, attempts: int, spec: "GenSpec"):
        super().__init__(
            f"rejection budget exhausted after {attempts} attempts "
            f"(n={spec.num_vars}, k={spec.k}, linear={spec.require_linear}, "
            f"disjoint={spec.require_pairwise_disjoint})"
        )
        self.attempts = attempts


@dataclass(frozen=True)
class GenSpec:
    num_vars: int
    k: int
    require_linear: bool = False
    require_pairwise_disjoint: bool = False
    seed: int = 0
    max_rejections: int = DEFAULT_MAX_REJECTIONS

    def __post_init__(self):
        if self.num_vars < 3 or self.num_vars % 3:
            raise ValueError("num_vars must be a positive multiple of 3")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def profile(self) -> Profile:
        if self.require_pairwise_disjoint:
            return Profile.positive_k_disjoint(self.k, linear=self.require_linear)
        return Profile(
            f"Positive {'Linear ' if self.require_linear else ''}{self.k} partitions",
            positive=True,
            linear=self.require_linear,
            blocks=self.k,
            disjoint=self.require_pairwise_disjoint,
            partitions=True,
        )


def random_partition(rng: random.Random, n: int) -> list[tuple[int, ...]]:
    perm = list(range(n))
    rng.shuffle(perm)
    return [tuple(sorted(perm[i:i + 3])) for i in range(0, n, 3)]


def _fits(block, triples: set, pairs: set, spec: GenSpec) -> bool:
    if spec.require_pairwise_disjoint and any(t in triples for t in block):
        return False
    if spec.require_linear:
        for t in block:
            if t in triples:
                # the same clause again is not a second clause
                continue
            if any(p in pairs for p in combinations(t, 2)):
                return False
    return True


def gen_k_disjoint(spec: GenSpec) -> tuple[Formula, Decomposition]:
    """k random partitions of the variables into triples, as a formula plus
    decomposition. Without ``require_pairwise_disjoint`` a repeated triple is
    one clause listed in several blocks."""
    rng = random.Random(spec.seed)
    attempts = 0
    while True:
        blocks: list[list[tuple[int, ...]]] = []
        triples: set[tuple[int, ...]] = set()
        pairs: set[tuple[int, int]] = set()
        stuck = 0
        while len(blocks) < spec.k:
            if attempts >= spec.max_rejections:
                raise GenerationError(attempts, spec)
            attempts += 1
            block = random_partition(rng, spec.num_vars)
            if not _fits(block, triples, pairs, spec):
                stuck += 1
                if stuck >= _RESTART_AFTER:
                    break
                continue
            stuck = 0
            blocks.append(block)
            for t in block:
                triples.add(t)
                pairs.update(combinations(t, 2))
        if len(blocks) == spec.k:
            break

    index: dict[tuple[int, ...], int] = {}
    clauses = []
    dblocks = []
    for block in blocks:
        ids = []
        for t in block:
            if t not in index:
                index[t] = len(clauses)
                clauses.append(Clause(Literal(v) for v in t))
            ids.append(index[t])
        dblocks.append(ids)
    f = Formula(spec.num_vars, tuple(clauses))
    d = Decomposition(dblocks)
    report = validate(f, d, spec.profile())
    assert report.passed, report.failure
    return f, d


def gen_positive_e4(n: int, seed: int, max_rejections: int = DEFAULT_MAX_REJECTIONS) -> Formula:
    """A Positive NAE-3-Sat-E4 formula: four disjoint random partitions,
    decomposition dropped."""
    f, _ = gen_k_disjoint(GenSpec(n, 4, require_pairwise_disjoint=True, seed=seed,
                                  max_rejections=max_rejections))
    return f


def gen_gapped_four_disjoint(
    n: int, seed: int, gaps: int = 1, max_rejections: int = DEFAULT_MAX_REJECTIONS
) -> tuple[Formula, Decomposition]:
    """A 4-disjoint instance whose blocks 2-4 each miss ``gaps`` triples.

    Block 1 stays a partition and the three uncovered sets all have size
    3*gaps: the input shape for completing partitions.
    """
    if not 0 <= gaps <= n // 3:
        raise ValueError("gaps out of range")
    f, d = gen_k_disjoint(GenSpec(n, 4, require_pairwise_disjoint=True, seed=seed,
                                  max_rejections=max_rejections))
    rng = random.Random(seed ^ 0x9E3779B97F4A7C15)
    dropped = set()
    for q in (1, 2, 3):
        dropped.update(rng.sample(list(d.blocks[q]), gaps))
    keep = [j for j in range(f.num_clauses) if j not in dropped]
    renumber = {j: i for i, j in enumerate(keep)}
    g = Formula(f.num_vars, tuple(f.clauses[j] for j in keep))
    blocks = [[renumber[j] for j in b if j in renumber] for b in d.blocks]
    return g, Decomposition(blocks)
