"""Problem-agnostic solution operators.

Construction (feasible unit assignment, initial solution, repair), the ten
concrete neighborhood moves, destroy-and-repair and the two crossovers.  All
operators are pure in (model, input, rng): they never mutate their inputs and
draw randomness only from the ``random.Random`` they are given.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from restask.errors import NoFeasibleResource, WrongArity
from restask.model import (
    EvaluatedSolution,
    Family,
    ProblemModel,
    SolutionStructure,
    evaluate,
)
from restask.ranking import Comparison, compare, no_worse


class NeighborhoodKind(Enum):
    SWAP_INTRA = 0
    SWAP_INTER = 1
    SHIFT_INTRA = 2
    SHIFT_INTER = 3
    SHIFT_ALL_INTER = 4
    REMOVE = 5
    INSERT = 6
    REMOVE_INSERT = 7
    REVERSE_INTRA = 8
    REVERSE_INTER = 9

    @property
    def inter(self) -> bool:
        return self in _INTER

    @property
    def intra(self) -> bool:
        return self in _INTRA


_INTER = {NeighborhoodKind.SWAP_INTER, NeighborhoodKind.SHIFT_INTER,
          NeighborhoodKind.SHIFT_ALL_INTER, NeighborhoodKind.REVERSE_INTER}
_INTRA = {NeighborhoodKind.SWAP_INTRA, NeighborhoodKind.SHIFT_INTRA, NeighborhoodKind.REVERSE_INTRA}

ALL_KINDS: tuple[NeighborhoodKind, ...] = tuple(NeighborhoodKind)


def violations_not_increased(new: EvaluatedSolution, old: EvaluatedSolution) -> bool:
    return all(a <= b for a, b in zip(new.violations, old.violations))


# --------------------------------------------------------------------------
# construction


class _Insertability:
    """Cheap template checks for appending task j to resource i.

    Mirrors the prefilters used to build the feasible resource and task sets:
    an insertion is admissible when it does not raise any row of the
    resource, task, pairing or resource-task templates.
    """

    def __init__(self, model: ProblemModel, structure: SolutionStructure):
        self.model = model
        self.loads = structure.loads()
        loc = structure.locations()
        self.resource = [(c, c.expressions(structure)) for c in model.constraints_of(Family.RESOURCE)]
        self.task = [(c, c.expressions_from(loc, model.n)) for c in model.constraints_of(Family.TASK)]
        self.resource_task = [(c, c.expressions_from(loc)) for c in model.constraints_of(Family.RESOURCE_TASK)]
        self.pairing = model.constraints_of(Family.PAIRING)
        self.resource_sets = {j: {i for i, _ in cells} for j, cells in loc.items()} if self.pairing else {}

    def has_room(self, i: int, extra: int = 1) -> bool:
        return self.loads[i - 1] + extra <= self.model.capacity(i)

    def resource_ok(self, i: int, j: int) -> bool:
        k = self.loads[i - 1] + 1
        return all(c.insertion_ok(e, i, j, k) for c, e in self.resource)

    def task_ok(self, i: int, j: int) -> bool:
        k = self.loads[i - 1] + 1
        if not all(c.insertion_ok(e, i, j, k) for c, e in self.task):
            return False
        if not all(c.insertion_ok(e, i, j, k) for c, e in self.resource_task):
            return False
        return all(c.insertion_ok(self.resource_sets, i, j) for c in self.pairing)

    def ok(self, i: int, j: int) -> bool:
        return self.has_room(i) and self.resource_ok(i, j) and self.task_ok(i, j)


def _feasible_positions(model: ProblemModel, sub: Sequence[int], j: int) -> list[int]:
    positions = range(1, len(sub) + 2) if model.ordered else [len(sub) + 1]
    prec = model.constraints_of(Family.PRECEDENCE)
    if not prec:
        return list(positions)
    return [p for p in positions if all(c.position_ok(sub, j, p) for c in prec)]


def _insert(structure: SolutionStructure, i: int, j: int, p: int) -> SolutionStructure:
    sub = structure.assignments[i - 1]
    return structure.replace({i - 1: sub[: p - 1] + (j,) + sub[p - 1:]})


def best_insertion(model: ProblemModel, sol: EvaluatedSolution, i: int, j: int,
                   strict: bool = False) -> EvaluatedSolution | None:
    """Ranking-best solution obtained by putting task ``j`` somewhere on resource ``i``.

    Ties go to the lowest position.  With ``strict`` only positions that
    raise no violation component are considered.
    """
    S = sol.structure
    best = None
    for p in _feasible_positions(model, S.assignments[i - 1], j):
        cand = evaluate(model, _insert(S, i, j, p))
        if strict and not violations_not_increased(cand, sol):
            continue
        if best is None or compare(cand, best, model.sense) is Comparison.BETTER:
            best = cand
    return best


@dataclass
class ConstructionState:
    current: EvaluatedSolution
    infeasible_resources: set[int] = field(default_factory=set)
    infeasible_tasks: dict[int, set[int]] = field(default_factory=dict)
    # prefilter results for ``current``; rebuilt whenever it changes
    _ins: _Insertability | None = field(default=None, repr=False)
    _fr: list[int] | None = field(default=None, repr=False)
    _ft: dict[int, list[int]] = field(default_factory=dict, repr=False)

    def blocked(self, i: int) -> set[int]:
        return self.infeasible_tasks.setdefault(i, set())

    def insertability(self, model: ProblemModel) -> _Insertability:
        if self._ins is None:
            self._ins = _Insertability(model, self.current.structure)
            self._fr = None
            self._ft = {}
        return self._ins

    def move_to(self, sol: EvaluatedSolution) -> None:
        self.current = sol
        self._ins = None

    def candidate_resources(self, model: ProblemModel) -> list[int]:
        ins = self.insertability(model)
        if self._fr is None:
            self._fr = feasible_resources(model, ins, set())
        return [i for i in self._fr if i not in self.infeasible_resources]

    def candidate_tasks(self, model: ProblemModel, i: int) -> list[int]:
        ins = self.insertability(model)
        ft = self._ft.get(i)
        if ft is None:
            ft = self._ft[i] = [j for j in range(1, model.n + 1) if ins.task_ok(i, j) and ins.resource_ok(i, j)]
        blocked = self.blocked(i)
        return [j for j in ft if j not in blocked]


def feasible_resources(model: ProblemModel, ins: _Insertability, excluded: set[int]) -> list[int]:
    return [
        i for i in range(1, model.m + 1)
        if i not in excluded and ins.has_room(i)
        and any(ins.resource_ok(i, j) for j in range(1, model.n + 1))
    ]


def feasible_assignment(model: ProblemModel, state: ConstructionState, rng: random.Random,
                        strict: bool = False) -> ConstructionState:
    """One attempted unit assignment; updates ``state`` in place and returns it.

    Raises NoFeasibleResource when no resource outside the excluded set can
    take any task, which ends a construction loop.
    """
    sol = state.current
    fr = state.candidate_resources(model)
    if not fr:
        raise NoFeasibleResource()
    i = rng.choice(fr)
    blocked = state.blocked(i)
    ft = state.candidate_tasks(model, i)
    if not ft:
        state.infeasible_resources.add(i)
        return state
    j = rng.choice(ft)
    cand = best_insertion(model, sol, i, j, strict=strict)
    if cand is not None and no_worse(cand, sol, model.sense):
        state.move_to(cand)
        if model.ordered:
            blocked.clear()
    else:
        blocked.add(j)
        if len(blocked) >= model.n:
            state.infeasible_resources.add(i)
    return state


def repair(model: ProblemModel, sol: EvaluatedSolution, rng: random.Random, strict: bool = False,
           blocked: dict[int, Iterable[int]] | None = None) -> EvaluatedSolution:
    """Insert tasks until every resource is exhausted, starting from ``sol``."""
    state = ConstructionState(sol, set(), {i: set(ts) for i, ts in (blocked or {}).items()})
    while len(state.infeasible_resources) < model.m:
        try:
            feasible_assignment(model, state, rng, strict=strict)
        except NoFeasibleResource:
            break
    return state.current


def initial_solution(model: ProblemModel, rng: random.Random) -> EvaluatedSolution:
    return repair(model, evaluate(model, model.empty_structure()), rng)


def destroy(structure: SolutionStructure, nd: int, rng: random.Random) -> SolutionStructure:
    cells = [(i, k) for i, sub in enumerate(structure.assignments) for k in range(len(sub))]
    drop = set(rng.sample(cells, min(max(nd, 0), len(cells))))
    return SolutionStructure(
        tuple(tuple(j for k, j in enumerate(sub) if (i, k) not in drop)
              for i, sub in enumerate(structure.assignments)),
        structure.ordered,
    )


def destroy_repair(model: ProblemModel, sol: EvaluatedSolution, nd: int, rng: random.Random) -> EvaluatedSolution:
    destroyed = evaluate(model, destroy(sol.structure, nd, rng))
    return repair(model, destroyed, rng)


# --------------------------------------------------------------------------
# neighborhood moves


def _seg_len(rng: random.Random, available: int) -> int:
    return min(rng.choice((1, 2)), available)


def _fits(model: ProblemModel, structure: SolutionStructure) -> bool:
    return all(len(s) <= model.capacity(i) for i, s in enumerate(structure.assignments, 1))


def _swap_intra(model, S, rng):
    if not model.ordered:
        return None
    cands = [i for i, s in enumerate(S.assignments) if len(s) >= 2]
    if not cands:
        return None
    i = rng.choice(cands)
    sub = S.assignments[i]
    L1, L2 = _seg_len(rng, len(sub)), _seg_len(rng, len(sub))
    if L1 + L2 > len(sub):
        L1 = L2 = 1
    slack = len(sub) - L1 - L2
    a = rng.randint(0, slack)
    b = a + L1 + rng.randint(0, slack - a)
    new = sub[:a] + sub[b:b + L2] + sub[a + L1:b] + sub[a:a + L1] + sub[b + L2:]
    return S.replace({i: new})


def _swap_inter(model, S, rng):
    cands = [i for i, s in enumerate(S.assignments) if s]
    if model.m < 2 or len(cands) < 2:
        return None
    i1, i2 = rng.sample(cands, 2)
    s1, s2 = S.assignments[i1], S.assignments[i2]
    L1, L2 = _seg_len(rng, len(s1)), _seg_len(rng, len(s2))
    a1, a2 = rng.randint(0, len(s1) - L1), rng.randint(0, len(s2) - L2)
    new = S.replace({
        i1: s1[:a1] + s2[a2:a2 + L2] + s1[a1 + L1:],
        i2: s2[:a2] + s1[a1:a1 + L1] + s2[a2 + L2:],
    })
    return new if _fits(model, new) else None


def _shift_intra(model, S, rng):
    if not model.ordered:
        return None
    cands = [i for i, s in enumerate(S.assignments) if len(s) >= 2]
    if not cands:
        return None
    i = rng.choice(cands)
    sub = S.assignments[i]
    L = min(_seg_len(rng, len(sub)), len(sub) - 1)
    a = rng.randint(0, len(sub) - L)
    seg, rest = sub[a:a + L], sub[:a] + sub[a + L:]
    p = rng.choice([q for q in range(len(rest) + 1) if q != a])
    return S.replace({i: rest[:p] + seg + rest[p:]})


def _place_block(model, rng, target: tuple[int, ...], block: tuple[int, ...]) -> tuple[int, ...]:
    p = rng.randint(0, len(target)) if model.ordered else len(target)
    return target[:p] + block + target[p:]


def _shift_inter(model, S, rng, whole: bool):
    if model.m < 2:
        return None
    sources = [i for i, s in enumerate(S.assignments) if s]
    if not sources:
        return None
    src = rng.choice(sources)
    sub = S.assignments[src]
    if whole:
        a, L = 0, len(sub)
    else:
        L = _seg_len(rng, len(sub))
        a = rng.randint(0, len(sub) - L)
    targets = [t for t in range(model.m) if t != src and len(S.assignments[t]) + L <= model.capacity(t + 1)]
    if not targets:
        return None
    tgt = rng.choice(targets)
    block = sub[a:a + L]
    return S.replace({src: sub[:a] + sub[a + L:], tgt: _place_block(model, rng, S.assignments[tgt], block)})


def _remove(model, S, rng):
    if S.total_assigned() == 0:
        return None
    return destroy(S, 1, rng)


def _reverse_intra(model, S, rng):
    if not model.ordered:
        return None
    cands = [i for i, s in enumerate(S.assignments) if len(s) >= 2]
    if not cands:
        return None
    i = rng.choice(cands)
    sub = S.assignments[i]
    a, b = sorted(rng.sample(range(len(sub)), 2))
    return S.replace({i: sub[:a] + sub[a:b + 1][::-1] + sub[b + 1:]})


def _reverse_inter(model, S, rng):
    cands = [i for i, s in enumerate(S.assignments) if s]
    if model.m < 2 or len(cands) < 2:
        return None
    i1, i2 = rng.sample(cands, 2)
    s1, s2 = S.assignments[i1], S.assignments[i2]
    a = rng.randint(0, len(s1) - 1)  # s1 keeps s1[:a]
    b = rng.randint(1, len(s2))  # s2 gives up s2[:b]
    tail = s1[a:]
    rev = (tail + s2[:b])[::-1]
    return S.replace({i1: s1[:a] + rev[:len(tail)], i2: rev[len(tail):] + s2[b:]})


def _insert_move(model: ProblemModel, sol: EvaluatedSolution, rng) -> EvaluatedSolution | None:
    ins = _Insertability(model, sol.structure)
    tasks = [j for j in range(1, model.n + 1) if any(ins.ok(i, j) for i in range(1, model.m + 1))]
    if not tasks:
        return None
    j = rng.choice(tasks)
    best = None
    for i in range(1, model.m + 1):
        if not ins.ok(i, j):
            continue
        cand = best_insertion(model, sol, i, j, strict=True)
        if cand is not None and (best is None or compare(cand, best, model.sense) is Comparison.BETTER):
            best = cand
    return best


def _remove_insert(model: ProblemModel, sol: EvaluatedSolution, rng) -> EvaluatedSolution | None:
    S = sol.structure
    sources = [i for i, s in enumerate(S.assignments) if s]
    if not sources:
        return None
    i = rng.choice(sources)
    sub = S.assignments[i]
    L = _seg_len(rng, len(sub))
    a = rng.randint(0, len(sub) - L)
    removed = sub[a:a + L]
    reduced = evaluate(model, S.replace({i: sub[:a] + sub[a + L:]}))
    # removed tasks may move elsewhere but not straight back
    return repair(model, reduced, rng, strict=True, blocked={i + 1: removed})


def apply_neighborhood(model: ProblemModel, sol: EvaluatedSolution, kind: NeighborhoodKind,
                       rng: random.Random) -> EvaluatedSolution | None:
    """Neighbor of ``sol`` under ``kind``, or None when the move cannot apply."""
    S = sol.structure
    K = NeighborhoodKind
    if kind is K.INSERT:
        return _insert_move(model, sol, rng)
    if kind is K.REMOVE_INSERT:
        return _remove_insert(model, sol, rng)
    if kind is K.SWAP_INTRA:
        new = _swap_intra(model, S, rng)
    elif kind is K.SWAP_INTER:
        new = _swap_inter(model, S, rng)
    elif kind is K.SHIFT_INTRA:
        new = _shift_intra(model, S, rng)
    elif kind is K.SHIFT_INTER:
        new = _shift_inter(model, S, rng, whole=False)
    elif kind is K.SHIFT_ALL_INTER:
        new = _shift_inter(model, S, rng, whole=True)
    elif kind is K.REMOVE:
        new = _remove(model, S, rng)
    elif kind is K.REVERSE_INTRA:
        new = _reverse_intra(model, S, rng)
    else:
        new = _reverse_inter(model, S, rng)
    return None if new is None else evaluate(model, new)


# --------------------------------------------------------------------------
# crossover


def add_units_safely(model: ProblemModel, sol: EvaluatedSolution,
                     units: Iterable[tuple[int, int]]) -> EvaluatedSolution:
    """Append each ``(resource, task)`` in turn, skipping any that would raise a violation."""
    cur = sol
    for i, j in units:
        sub = cur.structure.assignments[i - 1]
        if len(sub) >= model.capacity(i):
            continue
        cand = evaluate(model, cur.structure.replace({i - 1: sub + (j,)}))
        if violations_not_increased(cand, cur):
            cur = cand
    return cur


def _cut(rng: random.Random, length: int) -> int:
    """Cut point c in 1..length (1 for empty sequences); splits before position c."""
    return rng.randint(1, length) if length else 1


def single_point_crossover(model: ProblemModel, parent1: EvaluatedSolution, parent2: EvaluatedSolution,
                           rng: random.Random) -> EvaluatedSolution:
    if model.m != 1:
        raise WrongArity(f"single-point crossover needs one resource, model has {model.m}")
    s1, s2 = parent1.structure[0], parent2.structure[0]
    c1, c2 = _cut(rng, len(s1)), _cut(rng, len(s2))
    child = evaluate(model, SolutionStructure((s1[:c1 - 1],), model.ordered))
    child = add_units_safely(model, child, ((1, j) for j in s2[c2 - 1:]))
    return repair(model, child, rng)


def two_point_crossover(model: ProblemModel, parent1: EvaluatedSolution, parent2: EvaluatedSolution,
                        rng: random.Random) -> EvaluatedSolution:
    if model.m < 2:
        raise WrongArity(f"two-point crossover needs at least two resources, model has {model.m}")
    lo, hi = sorted((rng.randint(0, model.m), rng.randint(0, model.m)))
    window = range(lo, hi)
    base = parent1.structure.replace({i: () for i in window})
    child = evaluate(model, base)
    units = [(i + 1, j) for i in window for j in parent2.structure[i]]
    child = add_units_safely(model, child, units)
    return repair(model, child, rng)


def tournament(model: ProblemModel, pop: Sequence[EvaluatedSolution], candidates: Sequence[int],
               rng: random.Random) -> int:
    """Index of the better of two uniform draws from ``candidates``."""
    a, b = rng.choice(candidates), rng.choice(candidates)
    return a if compare(pop[a], pop[b], model.sense) is not Comparison.WORSE else b


def crossover(model, parent1, parent2, rng):
    if model.m == 1:
        return single_point_crossover(model, parent1, parent2, rng)
    return two_point_crossover(model, parent1, parent2, rng)


def crossover_operation(model: ProblemModel, pop: Sequence[EvaluatedSolution], p_c: float,
                        rng: random.Random) -> list[EvaluatedSolution]:
    offspring = list(pop)
    for idx, parent1 in enumerate(pop):
        if rng.random() < p_c:
            others = [k for k in range(len(pop)) if k != idx]
            parent2 = pop[tournament(model, pop, others, rng)]
            offspring[idx] = crossover(model, parent1, parent2, rng)
    return offspring
