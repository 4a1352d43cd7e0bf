"""Bin packing with conflicts: bins are unordered resources, items are tasks."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from restask.errors import InvalidInstance
from restask.model import (
    PairMode,
    Pairing,
    ProblemModel,
    Relation,
    Resource,
    ResourceAggregate,
    Task,
    TaskAggregate,
    used_resources,
)


def _normalize_edges(edges, n, what):
    out = set()
    for a, b in edges:
        a, b = int(a), int(b)
        if a == b:
            raise InvalidInstance(f"{what}: self-loop on {a}")
        if not (1 <= a <= n and 1 <= b <= n):
            raise InvalidInstance(f"{what}: ({a}, {b}) out of range 1..{n}")
        out.add((min(a, b), max(a, b)))
    return tuple(sorted(out))


def greedy_clique(n: int, edges) -> int:
    adj = {v: set() for v in range(1, n + 1)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    best = 1 if n else 0
    for v in sorted(adj, key=lambda u: -len(adj[u])):
        clique = [v]
        for u in sorted(adj[v], key=lambda u: -len(adj[u])):
            if all(u in adj[w] for w in clique):
                clique.append(u)
        best = max(best, len(clique))
    return best


@dataclass(frozen=True)
class BppcInstance:
    capacity: float
    sizes: tuple[float, ...]
    conflicts: tuple[tuple[int, int], ...] = ()
    name: str = "bppc"

    def __post_init__(self):
        if self.capacity <= 0 or any(s <= 0 for s in self.sizes):
            raise InvalidInstance("capacity and item sizes must be positive")
        object.__setattr__(self, "conflicts", _normalize_edges(self.conflicts, len(self.sizes), "conflict"))

    @property
    def n(self) -> int:
        return len(self.sizes)


def model_bppc(inst: BppcInstance) -> ProblemModel:
    n = inst.n
    return ProblemModel(
        resources=[Resource(i, {"capacity": inst.capacity}) for i in range(1, n + 1)],
        tasks=[Task(j, {"size": s}) for j, s in enumerate(inst.sizes, 1)],
        ordered=False,
        objective=used_resources(),
        constraints=[
            ResourceAggregate(list(inst.sizes), [inst.capacity] * n, Relation.LE, "capacity"),
            Pairing(inst.conflicts, PairMode.DIFFERENT_RESOURCE, "conflict"),
            TaskAggregate(1.0, 1.0, Relation.EQ, "assign_once"),
        ],
        name=inst.name,
        interchangeable_resources=True,
    )


def lower_bound(inst: BppcInstance) -> float:
    if not inst.n:
        return 0.0
    return float(max(math.ceil(sum(inst.sizes) / inst.capacity - 1e-9), greedy_clique(inst.n, inst.conflicts)))


def random_bppc(rng: random.Random, n: int, capacity: int = 150, density: float = 0.1,
                name: str = "bppc") -> BppcInstance:
    sizes = tuple(float(rng.randint(20, 100)) for _ in range(n))
    conflicts = tuple((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < density)
    return BppcInstance(float(capacity), sizes, conflicts, name)
