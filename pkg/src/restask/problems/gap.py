"""Generalized assignment: agents are unordered resources, jobs are tasks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from restask.errors import InvalidInstance
from restask.model import (
    ProblemModel,
    Relation,
    Resource,
    ResourceAggregate,
    Task,
    TaskAggregate,
    assignment_cost,
)


@dataclass(frozen=True)
class GapInstance:
    capacities: tuple[float, ...]
    demand: tuple[tuple[float, ...], ...]  # [agent][job]
    cost: tuple[tuple[float, ...], ...]  # [agent][job]
    name: str = "gap"

    def __post_init__(self):
        m = len(self.capacities)
        if m == 0:
            raise InvalidInstance("GAP needs at least one agent")
        if len(self.demand) != m or len(self.cost) != m:
            raise InvalidInstance("demand and cost need one row per agent")
        n = len(self.demand[0])
        if any(len(r) != n for r in self.demand) or any(len(r) != n for r in self.cost):
            raise InvalidInstance("ragged demand or cost matrix")
        if any(q <= 0 for q in self.capacities) or any(q <= 0 for r in self.demand for q in r):
            raise InvalidInstance("capacities and demands must be positive")

    @property
    def m(self) -> int:
        return len(self.capacities)

    @property
    def n(self) -> int:
        return len(self.demand[0])


def model_gap(inst: GapInstance) -> ProblemModel:
    return ProblemModel(
        resources=[Resource(i, {"capacity": q}) for i, q in enumerate(inst.capacities, 1)],
        tasks=[Task(j) for j in range(1, inst.n + 1)],
        ordered=False,
        objective=assignment_cost([list(r) for r in inst.cost]),
        constraints=[
            ResourceAggregate([list(r) for r in inst.demand], list(inst.capacities), Relation.LE, "capacity"),
            TaskAggregate(1.0, 1.0, Relation.EQ, "assign_once"),
        ],
        name=inst.name,
    )


def lower_bound(inst: GapInstance) -> float:
    return float(sum(min(inst.cost[i][j] for i in range(inst.m)) for j in range(inst.n)))


def random_gap(rng: random.Random, m: int, n: int, tightness: float = 0.8, name: str = "gap") -> GapInstance:
    """OR-Library style type-C instance: costs 10..50, demands 5..25."""
    demand = tuple(tuple(rng.randint(5, 25) for _ in range(n)) for _ in range(m))
    cost = tuple(tuple(rng.randint(10, 50) for _ in range(n)) for _ in range(m))
    caps = tuple(float(max(max(r) for r in demand) if n else 1) for _ in range(m))
    if n:
        per = int(tightness * sum(sum(r) for r in demand) / (m * m))
        caps = tuple(float(max(per, max(r))) for r in demand)
    return GapInstance(caps, tuple(tuple(float(v) for v in r) for r in demand),
                       tuple(tuple(float(v) for v in r) for r in cost), name)
