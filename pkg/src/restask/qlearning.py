"""Tabular Q-learning over neighborhood moves.

The search state is a 10-component vector built from the problem (resource
count, variable kind), the current solution (feasibility, per-template
satisfaction, largest resource load) and the search (stagnation).  Actions are
the concrete neighborhood moves.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from restask.model import EvaluatedSolution, Family, ProblemModel, TEMPLATE_FAMILIES
from restask.operators import ALL_KINDS, NeighborhoodKind, apply_neighborhood
from restask.ranking import Comparison, compare, dominates

QState = tuple[int, ...]
ZERO_STATE: QState = (0,) * 10

REWARDS = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class QParams:
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 0.1
    window: int = 200  # selections between success-counter resets
    stagnation_threshold: int = 20
    top_fraction: float = 0.2
    # "q": epsilon-greedy over top-Q actions; "adaptive": roulette on success
    # rates over all actions; "random": uniform.
    selection: str = "q"


@dataclass
class QTable:
    actions: tuple[NeighborhoodKind, ...] = ALL_KINDS
    values: dict[QState, list[float]] = field(default_factory=dict)
    success: list[int] = field(default_factory=list)
    selected: list[int] = field(default_factory=list)
    selections_in_window: int = 0
    stagnation: int = 0

    def __post_init__(self):
        if not self.success:
            self.success = [0] * len(self.actions)
        if not self.selected:
            self.selected = [0] * len(self.actions)

    @property
    def ns(self) -> int:
        return len(self.actions)

    def row(self, state: QState) -> list[float]:
        r = self.values.get(state)
        if r is None:
            r = self.values[state] = [0.0] * self.ns
        return r

    def q(self, state: QState, a: int) -> float:
        r = self.values.get(state)
        return 0.0 if r is None else r[a]

    def success_rate(self, a: int) -> float:
        st = self.selected[a]
        return self.success[a] / st if st else 1.0

    def record(self, a: int, success: bool, window: int) -> None:
        if self.selections_in_window >= window:
            self.success = [0] * self.ns
            self.selected = [0] * self.ns
            self.selections_in_window = 0
        self.selected[a] += 1
        self.selections_in_window += 1
        if success:
            self.success[a] += 1

    def dump(self) -> str:
        """Text table: one row per visited state, one column per action."""
        head = "state\t" + "\t".join(k.name for k in self.actions)
        lines = [head]
        for s in sorted(self.values):
            lines.append("".join(map(str, s)) + "\t" + "\t".join(f"{v:.4f}" for v in self.values[s]))
        return "\n".join(lines) + "\n"


def compute_state(model: ProblemModel, sol: EvaluatedSolution, stagnation: int,
                  threshold: int = 20) -> QState:
    s1 = 1 if model.m == 1 else 2
    s2 = 2 if model.ordered else 1
    s3 = 1 if sol.feasible else 2
    flags = tuple(1 if model.family_satisfied(sol.violations, f) else 2 for f in TEMPLATE_FAMILIES)
    top = max(sol.structure.loads(), default=0)
    s9 = 1 if top <= 1 else (2 if top == 2 else 3)
    s10 = 1 if stagnation >= threshold else 2
    return (s1, s2, s3) + flags + (s9, s10)


def reward(prev: EvaluatedSolution, nxt: EvaluatedSolution | None, sense) -> int:
    if nxt is None:
        return -2
    c = compare(nxt, prev, sense)
    if c is Comparison.BETTER:
        return 2
    if c is Comparison.EQUAL:
        return 0
    if dominates(prev.violations, nxt.violations):
        return -1
    return 1


def update_q(table: QTable, s_t: QState, a_t: int, r: float, s_next: QState,
             alpha: float, gamma: float) -> QTable:
    row = table.row(s_t)
    future = max(table.row(s_next))
    # convex form: alpha=1 lands exactly on the target, alpha=0 leaves Q untouched
    row[a_t] = (1.0 - alpha) * row[a_t] + alpha * (r + gamma * future)
    return table


def _roulette(rng: random.Random, pool: Sequence[int], weights: Sequence[float]) -> int:
    total = math.fsum(weights)
    if total <= 0:
        return rng.choice(pool)
    pick = rng.random() * total
    acc = 0.0
    for a, w in zip(pool, weights):
        acc += w
        if pick < acc:
            return a
    return pool[-1]


def top_pool(table: QTable, state: QState, fraction: float = 0.2) -> list[int]:
    size = max(1, math.ceil(fraction * table.ns))
    ranked = sorted(range(table.ns), key=lambda a: (-table.q(state, a), a))
    return ranked[:size]


def select_action(table: QTable, state: QState, epsilon: float, rng: random.Random,
                  fraction: float = 0.2) -> int:
    if rng.random() < epsilon:
        return rng.randrange(table.ns)
    pool = top_pool(table, state, fraction)
    return _roulette(rng, pool, [table.success_rate(a) for a in pool])


def choose(table: QTable, state: QState, params: QParams, rng: random.Random) -> int:
    if params.selection == "random":
        return rng.randrange(table.ns)
    if params.selection == "adaptive":
        pool = list(range(table.ns))
        return _roulette(rng, pool, [table.success_rate(a) for a in pool])
    return select_action(table, state, params.epsilon, rng, params.top_fraction)


def neighborhood_solution(model: ProblemModel, sol: EvaluatedSolution, table: QTable | None,
                          params: QParams, rng: random.Random) -> tuple[EvaluatedSolution, QTable]:
    """Pick a move, apply it and learn from the outcome.

    Returns the neighbor (or ``sol`` itself when the move is unreachable)
    together with the updated table, created on first use.
    """
    if table is None:
        table = QTable()
    s_t = compute_state(model, sol, table.stagnation, params.stagnation_threshold)
    a = choose(table, s_t, params, rng)
    nxt = apply_neighborhood(model, sol, table.actions[a], rng)
    r = reward(sol, nxt, model.sense)
    table.stagnation = 0 if r == 2 else table.stagnation + 1
    if nxt is None:
        s_next = ZERO_STATE
    else:
        s_next = compute_state(model, nxt, table.stagnation, params.stagnation_threshold)
    update_q(table, s_t, a, r, s_next, params.alpha, params.gamma)
    table.record(a, r == 2, params.window)
    return (sol if nxt is None else nxt), table
