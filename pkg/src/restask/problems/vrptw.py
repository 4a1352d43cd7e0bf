"""Vehicle routing with time windows: vehicles are ordered resources, customers are tasks.

Node 0 is the depot.  A vehicle leaves the depot at its ready time, waits at a
customer until the window opens and serves it; lateness against a window's
due time, and a late return to the depot, are violations.  The objective is
total travel distance including the return legs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property

from restask.errors import InvalidInstance
from restask.model import (
    AttributeEvaluator,
    CustomConstraint,
    ObjectiveSpec,
    ProblemModel,
    Relation,
    Resource,
    ResourceAggregate,
    Sense,
    SolutionStructure,
    Task,
    TaskAggregate,
)


@dataclass(frozen=True)
class VrptwInstance:
    coords: tuple[tuple[float, float], ...]  # 0..n, depot first
    demand: tuple[float, ...]
    ready: tuple[float, ...]
    due: tuple[float, ...]
    service: tuple[float, ...]
    n_vehicles: int
    capacity: float
    name: str = "vrptw"

    def __post_init__(self):
        size = len(self.coords)
        if size == 0:
            raise InvalidInstance("VRPTW needs a depot")
        for f in ("demand", "ready", "due", "service"):
            if len(getattr(self, f)) != size:
                raise InvalidInstance(f"{f} needs one value per node")
        if self.n_vehicles < 1 or self.capacity <= 0:
            raise InvalidInstance("need at least one vehicle with positive capacity")
        if any(e > l for e, l in zip(self.ready, self.due)):
            raise InvalidInstance("time window opens after it closes")
        if any(q < 0 for q in self.demand) or any(s < 0 for s in self.service):
            raise InvalidInstance("negative demand or service time")

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @cached_property
    def travel(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(math.dist(a, b) for b in self.coords) for a in self.coords)


@dataclass(frozen=True)
class Routes:
    start: dict[tuple[int, int, int], float]
    end: dict[tuple[int, int, int], float]
    returns: tuple[float, ...]  # depot arrival per vehicle
    distance: float


def simulate(inst: VrptwInstance, structure: SolutionStructure) -> Routes:
    t = inst.travel
    start, end, returns, legs = {}, {}, [], []
    for i, sub in enumerate(structure.assignments, 1):
        clock, prev = inst.ready[0], 0
        for k, j in enumerate(sub, 1):
            s = max(clock + t[prev][j], inst.ready[j])
            start[(i, j, k)] = s
            clock = end[(i, j, k)] = s + inst.service[j]
            legs.append(t[prev][j])
            prev = j
        if sub:
            legs.append(t[prev][0])
            returns.append(clock + t[prev][0])
        else:
            returns.append(inst.ready[0])
    return Routes(start, end, tuple(returns), math.fsum(legs))


def _lateness(inst: VrptwInstance):
    n = inst.n

    def residual(structure, attrs):
        r = attrs["routes"]
        late = [0.0] * n
        for (i, j, k), s in r.start.items():
            late[j - 1] = max(late[j - 1], s - inst.due[j])
        return late + [x - inst.due[0] for x in r.returns]

    return residual


def model_vrptw(inst: VrptwInstance) -> ProblemModel:
    n, m = inst.n, inst.n_vehicles
    tasks = [Task(j, {"demand": inst.demand[j], "ready": inst.ready[j], "due": inst.due[j],
                      "service": inst.service[j]}) for j in range(1, n + 1)]
    return ProblemModel(
        resources=[Resource(i, {"capacity": inst.capacity}) for i in range(1, m + 1)],
        tasks=tasks,
        ordered=True,
        objective=ObjectiveSpec(Sense.MIN, lambda s, a: a["routes"].distance, "distance"),
        constraints=[
            ResourceAggregate(list(inst.demand[1:]), [inst.capacity] * m, Relation.LE, "load"),
            TaskAggregate(1.0, 1.0, Relation.EQ, "visit_once"),
            CustomConstraint(_lateness(inst), n + m, name="time_windows"),
        ],
        attribute_evaluators=[AttributeEvaluator("routes", lambda s: simulate(inst, s))],
        name=inst.name,
    )


def lower_bound(inst: VrptwInstance) -> float:
    """Cheapest arc into every customer plus one cheapest return leg."""
    n, t = inst.n, inst.travel
    if n == 0:
        return 0.0
    into = math.fsum(min(t[a][j] for a in range(n + 1) if a != j) for j in range(1, n + 1))
    return into + min(t[j][0] for j in range(1, n + 1))


def random_vrptw(rng: random.Random, n: int, vehicles: int, capacity: float = 50.0,
                 horizon: float = 230.0, name: str = "vrptw") -> VrptwInstance:
    """Solomon R1-style: uniform coordinates on 0..100, windows around a feasible arrival."""
    coords = [(50.0, 50.0)] + [(float(rng.randint(0, 100)), float(rng.randint(0, 100))) for _ in range(n)]
    demand = [0.0] + [float(rng.randint(1, 20)) for _ in range(n)]
    ready, due = [0.0], [horizon]
    for j in range(1, n + 1):
        d0 = math.dist(coords[0], coords[j])
        centre = rng.uniform(d0, max(d0, horizon - d0 - 10))
        half = rng.uniform(10, 40)
        ready.append(float(max(0, int(centre - half))))
        due.append(float(min(int(horizon - d0 - 10), int(centre + half))))
        if due[-1] < ready[-1]:
            due[-1] = ready[-1]
    service = [0.0] + [10.0] * n
    return VrptwInstance(tuple(coords), tuple(demand), tuple(ready), tuple(due), tuple(service),
                         vehicles, capacity, name)
