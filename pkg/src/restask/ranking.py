"""Constraint-first comparison and hierarchical ranking of evaluated solutions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from restask.errors import LengthMismatch
from restask.model import EvaluatedSolution, Sense


class Comparison(Enum):
    BETTER = 1
    EQUAL = 0
    WORSE = -1

    def flip(self) -> Comparison:
        return Comparison(-self.value)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` is no larger than ``b`` everywhere and smaller somewhere."""
    if len(a) != len(b):
        raise LengthMismatch(f"violation vectors of length {len(a)} and {len(b)}")
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def compare_objective(fa: float, fb: float, sense: Sense = Sense.MIN) -> Comparison:
    if fa == fb:
        return Comparison.EQUAL
    better = fa < fb if sense is Sense.MIN else fa > fb
    return Comparison.BETTER if better else Comparison.WORSE


def compare(a: EvaluatedSolution, b: EvaluatedSolution, sense: Sense = Sense.MIN) -> Comparison:
    """Compare ``a`` against ``b``.

    Feasible beats infeasible.  Two feasible solutions compare on the
    objective.  Two infeasible ones compare on constraint dominance first and
    fall back to the objective when neither dominates.
    """
    fa, fb = a.feasible, b.feasible
    if fa != fb:
        return Comparison.BETTER if fa else Comparison.WORSE
    if not fa:
        if dominates(a.violations, b.violations):
            return Comparison.BETTER
        if dominates(b.violations, a.violations):
            return Comparison.WORSE
    return compare_objective(a.objective, b.objective, sense)


def is_better(a, b, sense=Sense.MIN) -> bool:
    return compare(a, b, sense) is Comparison.BETTER


def no_worse(a, b, sense=Sense.MIN) -> bool:
    return compare(a, b, sense) is not Comparison.WORSE


@dataclass(frozen=True)
class Rank:
    index: int  # position in the ranked population
    layer: int  # 0 holds every feasible solution; infeasible layers follow
    key: float  # objective value, orders solutions inside a layer


def _objective_key(f: float, sense: Sense) -> float:
    return f if sense is Sense.MIN else -f


def rank_solutions(pop: Sequence[EvaluatedSolution], sense: Sense = Sense.MIN) -> list[Rank]:
    """Hierarchical ranking, best first.

    Feasible solutions share layer 0 and are ordered by objective.  Infeasible
    solutions are layered by how many other infeasible solutions they
    dominate (more is better), then ordered by objective.  Ties keep
    population order.
    """
    feasible = [idx for idx, s in enumerate(pop) if s.feasible]
    infeasible = [idx for idx, s in enumerate(pop) if not s.feasible]
    counts = {
        idx: sum(1 for other in infeasible if other != idx and dominates(pop[idx].violations, pop[other].violations))
        for idx in infeasible
    }
    distinct = sorted(set(counts.values()), reverse=True)
    layer_of_count = {c: layer for layer, c in enumerate(distinct, 1)}

    ranks = [Rank(idx, 0, pop[idx].objective) for idx in feasible]
    ranks += [Rank(idx, layer_of_count[counts[idx]], pop[idx].objective) for idx in infeasible]
    ranks.sort(key=lambda r: (r.layer, _objective_key(r.key, sense), r.index))
    return ranks


def order(pop: Sequence[EvaluatedSolution], sense: Sense = Sense.MIN) -> list[int]:
    return [r.index for r in rank_solutions(pop, sense)]


def best_of(pop: Sequence[EvaluatedSolution], sense: Sense = Sense.MIN) -> EvaluatedSolution:
    return pop[rank_solutions(pop, sense)[0].index]
