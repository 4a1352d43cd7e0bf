"""Exhaustive search for ground-truth optima on tiny models.

Every task is placed at most once.  Unordered resources enumerate
assignments, ordered ones additionally enumerate the order within each
resource.  Interchangeable resources are enumerated up to relabeling with
restricted-growth labelings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterator

from restask.errors import TooLarge
from restask.model import EvaluatedSolution, ProblemModel, SolutionStructure, evaluate
from restask.ranking import is_better


@dataclass(frozen=True)
class OracleResult:
    best: EvaluatedSolution
    count: int  # structures evaluated

    @property
    def objective(self) -> float:
        return self.best.objective

    @property
    def feasible(self) -> bool:
        return self.best.feasible

    @property
    def structure(self) -> SolutionStructure:
        return self.best.structure


def _stirling2(k: int, b: int) -> int:
    return sum((-1) ** i * comb(b, i) * (b - i) ** k for i in range(b + 1)) // factorial(b)


def _lah(k: int, b: int) -> int:
    if k == b == 0:
        return 1
    if k == 0 or b == 0:
        return 0
    return comb(k - 1, b - 1) * factorial(k) // factorial(b)


def enumeration_size(model: ProblemModel) -> int:
    """Structures visited before position-capacity filtering."""
    n, m = model.n, model.m
    total = 0
    for k in range(n + 1):
        if model.interchangeable_resources:
            blocks = _lah if model.ordered else _stirling2
            ways = sum(blocks(k, b) for b in range(min(k, m) + 1))
        elif model.ordered:
            ways = factorial(k) * comb(k + m - 1, m - 1) if m else int(k == 0)
        else:
            ways = m ** k
        total += comb(n, k) * ways
    return total


def _labelings(model: ProblemModel) -> Iterator[tuple[int, ...]]:
    """Resource label (0 = unassigned) per task."""
    n, m = model.n, model.m
    if not model.interchangeable_resources:
        yield from itertools.product(range(m + 1), repeat=n)
        return

    labels = [0] * n

    def grow(j: int, used: int):
        if j == n:
            yield tuple(labels)
            return
        for lab in range(0, min(used + 1, m) + 1):
            labels[j] = lab
            yield from grow(j + 1, max(used, lab))

    yield from grow(0, 0)


def structures(model: ProblemModel) -> Iterator[SolutionStructure]:
    m = model.m
    for lab in _labelings(model):
        groups = [[] for _ in range(m)]
        for j, r in enumerate(lab, 1):
            if r:
                groups[r - 1].append(j)
        if any(len(g) > model.capacity(i) for i, g in enumerate(groups, 1)):
            continue
        if model.ordered:
            for seqs in itertools.product(*(itertools.permutations(g) for g in groups)):
                yield SolutionStructure(tuple(seqs), True)
        else:
            yield SolutionStructure(tuple(tuple(g) for g in groups), False)


def brute_force_oracle(model: ProblemModel, limit: int = 1_000_000) -> OracleResult:
    """Ranking-best structure over the whole space; raises TooLarge beyond ``limit``."""
    size = enumeration_size(model)
    if size > limit:
        raise TooLarge(size, limit)
    best = None
    count = 0
    for s in structures(model):
        cand = evaluate(model, s)
        count += 1
        if best is None or is_better(cand, best, model.sense):
            best = cand
    return OracleResult(best, count)
