"""Graph coloring: colors are unordered resources, nodes are tasks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from restask.errors import InvalidInstance
from restask.model import PairMode, Pairing, ProblemModel, Relation, Resource, Task, TaskAggregate, used_resources
from restask.problems.bppc import _normalize_edges, greedy_clique


@dataclass(frozen=True)
class GcInstance:
    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    n_colors: int | None = None  # None: max degree + 1
    name: str = "gc"

    def __post_init__(self):
        if self.n_nodes < 0:
            raise InvalidInstance("negative node count")
        object.__setattr__(self, "edges", _normalize_edges(self.edges, self.n_nodes, "edge"))
        if self.n_colors is not None and self.n_colors < 1:
            raise InvalidInstance("need at least one color")

    def degrees(self) -> list[int]:
        deg = [0] * (self.n_nodes + 1)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg[1:]

    @property
    def colors(self) -> int:
        if self.n_colors is not None:
            return self.n_colors
        return max(self.degrees(), default=0) + 1


def model_gc(inst: GcInstance) -> ProblemModel:
    return ProblemModel(
        resources=[Resource(c) for c in range(1, inst.colors + 1)],
        tasks=[Task(v) for v in range(1, inst.n_nodes + 1)],
        ordered=False,
        objective=used_resources(),
        constraints=[
            TaskAggregate(1.0, 1.0, Relation.EQ, "color_once"),
            Pairing(inst.edges, PairMode.DIFFERENT_RESOURCE, "adjacency"),
        ],
        name=inst.name,
        interchangeable_resources=True,
    )


def lower_bound(inst: GcInstance) -> float:
    return float(greedy_clique(inst.n_nodes, inst.edges))


def random_gc(rng: random.Random, n: int, p: float, name: str = "gc") -> GcInstance:
    edges = tuple((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < p)
    return GcInstance(n, edges, None, name)
