"""Random small models covering every constraint template, for fuzz and property tests."""

from __future__ import annotations

import random

from restask.model import (
    CustomConstraint,
    PairMode,
    Pairing,
    Precedence,
    ProblemModel,
    Relation,
    Resource,
    ResourceAggregate,
    ResourceTaskAggregate,
    SolutionStructure,
    Task,
    TaskAggregate,
    assignment_cost,
    profit,
    used_resources,
)


def random_model(rng: random.Random, max_m: int = 3, max_n: int = 6) -> ProblemModel:
    m, n = rng.randint(1, max_m), rng.randint(1, max_n)
    ordered = rng.random() < 0.5
    caps = [rng.choice([None, None, rng.randint(1, n)]) for _ in range(m)]
    resources = [Resource(i, {"w": rng.randint(1, 5)}, caps[i - 1]) for i in range(1, m + 1)]
    tasks = [Task(j, {"w": rng.randint(1, 5)}) for j in range(1, n + 1)]

    constraints = []
    if rng.random() < 0.7:
        weights = [rng.randint(1, 5) for _ in range(n)]
        constraints.append(ResourceAggregate(weights, [rng.choice([None, rng.randint(2, 12)]) for _ in range(m)],
                                             rng.choice([Relation.LE, Relation.LE, Relation.GE])))
    if rng.random() < 0.8:
        rel = rng.choice([Relation.EQ, Relation.LE, Relation.GE])
        constraints.append(TaskAggregate(1.0, 1.0, rel))
    pairs = [tuple(rng.sample(range(1, n + 1), 2)) for _ in range(rng.randint(0, 3))] if n >= 2 else []
    if pairs and rng.random() < 0.6:
        constraints.append(Pairing(pairs, rng.choice(list(PairMode))))
    if pairs and ordered and rng.random() < 0.4:
        constraints.append(Precedence(pairs))
    if rng.random() < 0.4:
        th = [[rng.choice([None, None, 0.0, 1.0]) for _ in range(n)] for _ in range(m)]
        constraints.append(ResourceTaskAggregate(1.0, th, Relation.LE))
    if rng.random() < 0.3:
        limit = rng.randint(1, n)
        constraints.append(CustomConstraint(lambda s, a, limit=limit: [s.total_assigned() - limit], 1))

    kind = rng.choice(["cost", "profit", "used"])
    if kind == "cost":
        objective = assignment_cost([[rng.randint(1, 9) for _ in range(n)] for _ in range(m)])
    elif kind == "profit":
        objective = profit([rng.randint(1, 9) for _ in range(n)])
    else:
        objective = used_resources()
    return ProblemModel(resources, tasks, ordered, objective, constraints, name="random")


def random_structure(rng: random.Random, model: ProblemModel) -> SolutionStructure:
    subs = []
    for i in range(1, model.m + 1):
        size = rng.randint(0, model.capacity(i) if model.resources[i - 1].capacity else min(model.n, 4))
        subs.append(tuple(rng.randint(1, model.n) for _ in range(size)))
    return SolutionStructure(tuple(subs), model.ordered)


def well_formed(model: ProblemModel, s: SolutionStructure) -> bool:
    if s.m != model.m or s.ordered != model.ordered:
        return False
    for i, sub in enumerate(s.assignments, 1):
        if len(sub) > model.capacity(i):
            return False
        if any(not (isinstance(j, int) and 1 <= j <= model.n) for j in sub):
            return False
    return True
