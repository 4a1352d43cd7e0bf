"""Resource-task data model.

A problem is a set of resources (vehicles, bins, machines, colors) and a set of
tasks (customers, items, operations, nodes).  A solution assigns tasks to the
positions of resources; positions are ordered for sequencing problems and
unordered for pure assignment problems.  Everything else (attribute variables,
the objective, the constraints) is computed from that structure.

Conventions: resources and tasks carry 1-based indices.  Inside a
:class:`SolutionStructure` the sub-assignment of resource ``i`` is stored at
tuple position ``i - 1``; task ids are stored as-is.  Coefficient callables
and the assignment tensor use 1-based ``(i, j, k)`` triples.
"""

from __future__ import annotations

import contextvars
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from restask.errors import DimensionMismatch, InvalidInstance

# Violations below this are floating-point residue from attribute arithmetic.
FEASIBILITY_TOL = 1e-9


class Sense(str, Enum):
    MIN = "min"
    MAX = "max"


class Relation(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Family(str, Enum):
    """Constraint families; the first five are the templated ones."""

    RESOURCE = "resource"
    TASK = "task"
    PAIRING = "pairing"
    PRECEDENCE = "precedence"
    RESOURCE_TASK = "resource_task"
    CUSTOM = "custom"


TEMPLATE_FAMILIES = (
    Family.RESOURCE,
    Family.TASK,
    Family.PAIRING,
    Family.PRECEDENCE,
    Family.RESOURCE_TASK,
)


@dataclass(frozen=True)
class Resource:
    index: int
    attributes: Mapping[str, float] = field(default_factory=dict)
    capacity: int | None = None  # max positions; None means unbounded

    def __post_init__(self):
        if self.capacity is not None and self.capacity < 1:
            raise InvalidInstance(f"resource {self.index}: position capacity must be >= 1")


@dataclass(frozen=True)
class Task:
    index: int
    attributes: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SolutionStructure:
    """Per-resource sequences of task ids."""

    assignments: tuple[tuple[int, ...], ...]
    ordered: bool = True

    @classmethod
    def empty(cls, m: int, ordered: bool = True) -> SolutionStructure:
        return cls(tuple(() for _ in range(m)), ordered)

    @classmethod
    def of(cls, subs: Iterable[Iterable[int]], ordered: bool = True) -> SolutionStructure:
        return cls(tuple(tuple(s) for s in subs), ordered)

    @property
    def m(self) -> int:
        return len(self.assignments)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.assignments[i]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.assignments)

    def loads(self) -> list[int]:
        return [len(s) for s in self.assignments]

    def total_assigned(self) -> int:
        return sum(len(s) for s in self.assignments)

    def replace(self, changes: Mapping[int, Sequence[int]]) -> SolutionStructure:
        """Return a copy with the 0-based resource slots in ``changes`` swapped out."""
        subs = list(self.assignments)
        for i, seq in changes.items():
            subs[i] = tuple(seq)
        return SolutionStructure(tuple(subs), self.ordered)

    def units(self) -> Iterator[tuple[int, int, int]]:
        """Yield occupied cells as 1-based ``(resource, task, position)``."""
        for i, sub in enumerate(self.assignments, 1):
            for k, j in enumerate(sub, 1):
                yield i, j, k

    def locations(self) -> dict[int, list[tuple[int, int]]]:
        loc: dict[int, list[tuple[int, int]]] = {}
        for i, sub in enumerate(self.assignments, 1):
            for k, j in enumerate(sub, 1):
                loc.setdefault(j, []).append((i, k))
        return loc

    def task_multiset(self) -> list[int]:
        return sorted(j for sub in self.assignments for j in sub)

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        if self.ordered:
            return self.assignments
        return tuple(tuple(sorted(s)) for s in self.assignments)


@dataclass(frozen=True)
class AssignmentTensor:
    """Sparse binary tensor y[i, j, k] = 1 iff task j sits at position k of resource i."""

    m: int
    n: int
    entries: frozenset[tuple[int, int, int]]

    def __getitem__(self, key: tuple[int, int, int]) -> int:
        return 1 if key in self.entries else 0

    def total(self) -> int:
        return len(self.entries)

    def dense(self, positions: Sequence[int]) -> list[list[list[int]]]:
        """Nested ``[i][j][k]`` 0/1 lists (0-based) with ``positions[i]`` slots per resource."""
        out = [[[0] * positions[i] for _ in range(self.n)] for i in range(self.m)]
        for i, j, k in self.entries:
            out[i - 1][j - 1][k - 1] = 1
        return out


def to_assignment_tensor(structure: SolutionStructure, n: int | None = None) -> AssignmentTensor:
    entries = frozenset(structure.units())
    if n is None:
        n = max((j for _, j, _ in entries), default=0)
    return AssignmentTensor(structure.m, n, entries)


def evaluate_vrptw_attributes(
    structure: SolutionStructure,
    travel: Sequence[Sequence[float]],
    service: Sequence[float],
) -> tuple[dict[tuple[int, int, int], float], dict[tuple[int, int, int], float]]:
    """Start and end service times for every occupied cell.

    ``travel`` is indexed over ``0..n`` with 0 the depot; ``service[j]`` is the
    service duration of task ``j`` (``service[0]`` unused).  The first task on a
    route starts at the depot travel time; each later task starts at the
    previous task's start plus the travel between them.
    """
    start: dict[tuple[int, int, int], float] = {}
    end: dict[tuple[int, int, int], float] = {}
    for i, sub in enumerate(structure.assignments, 1):
        prev = None
        prev_start = 0.0
        for k, j in enumerate(sub, 1):
            if k == 1:
                s = travel[0][j]
            else:
                s = prev_start + travel[prev][j]
            start[(i, j, k)] = s
            end[(i, j, k)] = s + service[j]
            prev, prev_start = j, s
    return start, end


# --------------------------------------------------------------------------
# coefficients and thresholds


class Coefficients:
    """Lookup ``rho(i, j, k)`` backed by a constant, a table or a function.

    Accepted forms: a number; a per-task sequence (``rho[j-1]``); a
    per-resource-task matrix (``rho[i-1][j-1]``); or a callable ``(i, j, k)``.
    Only the first three serialize.
    """

    def __init__(self, spec: Any):
        self.spec = spec
        if callable(spec):
            self.kind = "function"
            self._fn = spec
        elif isinstance(spec, (int, float)):
            self.kind = "constant"
            c = float(spec)
            self._fn = lambda i, j, k: c
        else:
            rows = list(spec)
            if rows and isinstance(rows[0], (list, tuple)):
                self.kind = "resource_task"
                table = [[float(v) for v in r] for r in rows]
                self.spec = table
                self._fn = lambda i, j, k: table[i - 1][j - 1]
            else:
                self.kind = "task"
                table = [float(v) for v in rows]
                self.spec = table
                self._fn = lambda i, j, k: table[j - 1]

    def __call__(self, i: int, j: int, k: int) -> float:
        return self._fn(i, j, k)

    @property
    def position_free(self) -> bool:
        return self.kind != "function"

    def to_json(self):
        if self.kind == "function":
            return None
        if self.kind == "constant":
            return self.spec
        key = "by_task" if self.kind == "task" else "by_resource_task"
        return {key: self.spec}


def _coef(spec) -> Coefficients:
    return spec if isinstance(spec, Coefficients) else Coefficients(spec)


def violation_measure(residual: float, equality: bool = False) -> float:
    """max{0, g} for inequality rows, |h| for equality rows."""
    return abs(residual) if equality else max(0.0, residual)


def relation_violation(expr: float, threshold: float | None, relation: Relation) -> float:
    if threshold is None:
        return 0.0
    if relation is Relation.LE:
        return violation_measure(expr - threshold)
    if relation is Relation.GE:
        return violation_measure(threshold - expr)
    return violation_measure(expr - threshold, equality=True)


# --------------------------------------------------------------------------
# constraints


class EvalContext:
    """Per-evaluation cache shared by the objective and constraints."""

    def __init__(self, structure: SolutionStructure, attributes: Mapping[str, Any]):
        self.structure = structure
        self.attributes = attributes

    @cached_property
    def locations(self) -> dict[int, list[tuple[int, int]]]:
        return self.structure.locations()

    @cached_property
    def resource_sets(self) -> dict[int, set[int]]:
        return {j: {i for i, _ in cells} for j, cells in self.locations.items()}


class Constraint:
    family: Family = Family.CUSTOM
    name: str = ""

    def rows(self, model: ProblemModel) -> int:
        raise NotImplementedError

    def violations(self, ctx: EvalContext) -> list[float]:
        raise NotImplementedError

    def to_json(self):
        return None


class ResourceAggregate(Constraint):
    """sum_k sum_j rho[i,j,k] y[i,j,k]  (<=, >=, =)  theta[i], one row per resource."""

    family = Family.RESOURCE

    def __init__(self, coefficients, thresholds: Sequence[float | None], relation=Relation.LE, name="resource"):
        self.coefficients = _coef(coefficients)
        self.thresholds = [None if t is None else float(t) for t in thresholds]
        self.relation = Relation(relation)
        self.name = name

    def rows(self, model):
        if len(self.thresholds) != model.m:
            raise InvalidInstance(f"{self.name}: need {model.m} thresholds, got {len(self.thresholds)}")
        return model.m

    def expressions(self, structure: SolutionStructure) -> list[float]:
        rho = self.coefficients
        return [
            math.fsum(rho(i, j, k) for k, j in enumerate(sub, 1))
            for i, sub in enumerate(structure.assignments, 1)
        ]

    def violations(self, ctx):
        return [
            relation_violation(e, t, self.relation)
            for e, t in zip(self.expressions(ctx.structure), self.thresholds)
        ]

    def insertion_ok(self, exprs: list[float], i: int, j: int, k: int) -> bool:
        t = self.thresholds[i - 1]
        if t is None:
            return True
        old = exprs[i - 1]
        new = old + self.coefficients(i, j, k)
        return relation_violation(new, t, self.relation) <= relation_violation(old, t, self.relation)

    def to_json(self):
        coef = self.coefficients.to_json()
        if coef is None:
            return None
        return {"template": "resource_aggregate", "name": self.name, "coefficients": coef,
                "thresholds": self.thresholds, "relation": self.relation.value}


class TaskAggregate(Constraint):
    """sum_i sum_k rho[i,j,k] y[i,j,k]  (<=, >=, =)  theta[j], one row per task."""

    family = Family.TASK

    def __init__(self, coefficients, thresholds, relation=Relation.EQ, name="task"):
        self.coefficients = _coef(coefficients)
        self._raw_thresholds = thresholds
        self.relation = Relation(relation)
        self.name = name
        self.thresholds: list[float | None] = []

    def rows(self, model):
        t = self._raw_thresholds
        if isinstance(t, (int, float)):
            self.thresholds = [float(t)] * model.n
        else:
            self.thresholds = [None if v is None else float(v) for v in t]
        if len(self.thresholds) != model.n:
            raise InvalidInstance(f"{self.name}: need {model.n} thresholds, got {len(self.thresholds)}")
        return model.n

    def expressions_from(self, locations: Mapping[int, list[tuple[int, int]]], n: int) -> list[float]:
        rho = self.coefficients
        out = [0.0] * n
        for j, cells in locations.items():
            out[j - 1] = math.fsum(rho(i, j, k) for i, k in cells)
        return out

    def violations(self, ctx):
        exprs = self.expressions_from(ctx.locations, len(self.thresholds))
        return [relation_violation(e, t, self.relation) for e, t in zip(exprs, self.thresholds)]

    def insertion_ok(self, exprs: list[float], i: int, j: int, k: int) -> bool:
        t = self.thresholds[j - 1]
        if t is None:
            return True
        old = exprs[j - 1]
        new = old + self.coefficients(i, j, k)
        return relation_violation(new, t, self.relation) <= relation_violation(old, t, self.relation)

    def to_json(self):
        coef = self.coefficients.to_json()
        if coef is None:
            return None
        return {"template": "task_aggregate", "name": self.name, "coefficients": coef,
                "thresholds": self.thresholds, "relation": self.relation.value}


class PairMode(str, Enum):
    SAME_RESOURCE = "same"
    DIFFERENT_RESOURCE = "different"


class Pairing(Constraint):
    """Task pairs that must share a resource, or must not; one row per pair.

    DIFFERENT rows count the resources holding both tasks.  SAME rows are 1
    when both tasks are assigned but share no resource.
    """

    family = Family.PAIRING

    def __init__(self, pairs: Iterable[tuple[int, int]], mode=PairMode.DIFFERENT_RESOURCE, name="pairing"):
        self.pairs = [(int(a), int(b)) for a, b in pairs]
        self.mode = PairMode(mode)
        self.name = name
        self.partners: dict[int, list[int]] = {}
        for a, b in self.pairs:
            self.partners.setdefault(a, []).append(b)
            self.partners.setdefault(b, []).append(a)

    def rows(self, model):
        for a, b in self.pairs:
            if not (1 <= a <= model.n and 1 <= b <= model.n) or a == b:
                raise InvalidInstance(f"{self.name}: bad pair ({a}, {b})")
        return len(self.pairs)

    def _row(self, ra: set[int], rb: set[int]) -> float:
        if self.mode is PairMode.DIFFERENT_RESOURCE:
            return float(len(ra & rb))
        if ra and rb and not (ra & rb):
            return 1.0
        return 0.0

    def violations(self, ctx):
        rs = ctx.resource_sets
        empty: set[int] = set()
        return [self._row(rs.get(a, empty), rs.get(b, empty)) for a, b in self.pairs]

    def insertion_ok(self, resource_sets: Mapping[int, set[int]], i: int, j: int) -> bool:
        empty: set[int] = set()
        mine = resource_sets.get(j, empty)
        if i in mine:
            return True
        grown = mine | {i}
        for p in self.partners.get(j, ()):
            theirs = resource_sets.get(p, empty)
            if self._row(grown, theirs) > self._row(mine, theirs):
                return False
        return True

    def to_json(self):
        return {"template": "pairing", "name": self.name, "pairs": [list(p) for p in self.pairs],
                "mode": self.mode.value}


class Precedence(Constraint):
    """Ordered pairs (before, after): on a shared resource ``before`` must come first.

    One row per pair, counting resources where the order is broken.
    """

    family = Family.PRECEDENCE

    def __init__(self, pairs: Iterable[tuple[int, int]], name="precedence"):
        self.pairs = [(int(a), int(b)) for a, b in pairs]
        self.name = name
        self.involving: dict[int, list[tuple[int, int]]] = {}
        for a, b in self.pairs:
            self.involving.setdefault(a, []).append((a, b))
            self.involving.setdefault(b, []).append((a, b))

    def rows(self, model):
        if not model.ordered:
            raise InvalidInstance(f"{self.name}: precedence needs ordered resources")
        for a, b in self.pairs:
            if not (1 <= a <= model.n and 1 <= b <= model.n) or a == b:
                raise InvalidInstance(f"{self.name}: bad pair ({a}, {b})")
        return len(self.pairs)

    @staticmethod
    def _broken(sub: Sequence[int], before: int, after: int) -> bool:
        last_before = -1
        first_after = None
        for k, t in enumerate(sub):
            if t == before:
                last_before = k
            elif t == after and first_after is None:
                first_after = k
        return first_after is not None and last_before > first_after

    def violations(self, ctx):
        rs = ctx.resource_sets
        subs = ctx.structure.assignments
        out = []
        for a, b in self.pairs:
            shared = rs.get(a, set()) & rs.get(b, set())
            out.append(float(sum(self._broken(subs[i - 1], a, b) for i in shared)))
        return out

    def position_ok(self, sub: Sequence[int], j: int, p: int) -> bool:
        """Whether inserting ``j`` at 1-based position ``p`` of ``sub`` breaks no new pair."""
        pairs = self.involving.get(j)
        if not pairs:
            return True
        new = tuple(sub[: p - 1]) + (j,) + tuple(sub[p - 1:])
        return all(self._broken(new, a, b) <= self._broken(sub, a, b) for a, b in pairs)

    def to_json(self):
        return {"template": "precedence", "name": self.name, "pairs": [list(p) for p in self.pairs]}


class ResourceTaskAggregate(Constraint):
    """sum_k rho[i,j,k] y[i,j,k]  (<=, >=, =)  theta[i,j]; one row per non-null threshold."""

    family = Family.RESOURCE_TASK

    def __init__(self, coefficients, thresholds: Sequence[Sequence[float | None]], relation=Relation.LE,
                 name="resource_task"):
        self.coefficients = _coef(coefficients)
        self.thresholds = [[None if v is None else float(v) for v in row] for row in thresholds]
        self.relation = Relation(relation)
        self.name = name
        self.keys = [
            (i, j)
            for i, row in enumerate(self.thresholds, 1)
            for j, v in enumerate(row, 1)
            if v is not None
        ]
        self.row_of = {key: r for r, key in enumerate(self.keys)}

    def rows(self, model):
        if len(self.thresholds) != model.m or any(len(r) != model.n for r in self.thresholds):
            raise InvalidInstance(f"{self.name}: thresholds must be {model.m} x {model.n}")
        return len(self.keys)

    def expressions_from(self, locations: Mapping[int, list[tuple[int, int]]]) -> list[float]:
        rho = self.coefficients
        parts: list[list[float]] = [[] for _ in self.keys]
        for j, cells in locations.items():
            for i, k in cells:
                r = self.row_of.get((i, j))
                if r is not None:
                    parts[r].append(rho(i, j, k))
        return [math.fsum(p) for p in parts]

    def violations(self, ctx):
        exprs = self.expressions_from(ctx.locations)
        return [
            relation_violation(e, self.thresholds[i - 1][j - 1], self.relation)
            for e, (i, j) in zip(exprs, self.keys)
        ]

    def insertion_ok(self, exprs: list[float], i: int, j: int, k: int) -> bool:
        r = self.row_of.get((i, j))
        if r is None:
            return True
        t = self.thresholds[i - 1][j - 1]
        old = exprs[r]
        new = old + self.coefficients(i, j, k)
        return relation_violation(new, t, self.relation) <= relation_violation(old, t, self.relation)

    def to_json(self):
        coef = self.coefficients.to_json()
        if coef is None:
            return None
        return {"template": "resource_task_aggregate", "name": self.name, "coefficients": coef,
                "thresholds": self.thresholds, "relation": self.relation.value}


class CustomConstraint(Constraint):
    """Rows from host code: ``residual(structure, attributes)`` returns g (or h) values."""

    def __init__(self, residual: Callable[[SolutionStructure, Mapping[str, Any]], Sequence[float]],
                 n_rows: int, equality: bool = False, name="custom", family=Family.CUSTOM):
        self.residual = residual
        self.n_rows = n_rows
        self.equality = equality
        self.name = name
        self.family = Family(family)

    def rows(self, model):
        return self.n_rows

    def violations(self, ctx):
        res = self.residual(ctx.structure, ctx.attributes)
        if len(res) != self.n_rows:
            raise DimensionMismatch(f"{self.name}: expected {self.n_rows} rows, got {len(res)}")
        return [violation_measure(float(r), self.equality) for r in res]


# --------------------------------------------------------------------------
# attribute variables and objectives


@dataclass(frozen=True)
class AttributeEvaluator:
    name: str
    compute: Callable[[SolutionStructure], Any]


@dataclass(frozen=True)
class ObjectiveSpec:
    sense: Sense
    value: Callable[[SolutionStructure, Mapping[str, Any]], float]
    name: str = "custom"
    params: Mapping[str, Any] | None = None  # set for serializable builtins

    def to_json(self):
        if self.params is None:
            return None
        return {"builtin": self.name, "sense": self.sense.value, **self.params}


def assignment_cost(cost, sense: Sense = Sense.MIN) -> ObjectiveSpec:
    """Total of ``cost(i, j, k)`` over occupied cells."""
    c = _coef(cost)

    def value(structure, attrs):
        return math.fsum(c(i, j, k) for i, j, k in structure.units())

    params = None if c.kind == "function" else {"cost": c.to_json()}
    return ObjectiveSpec(Sense(sense), value, "assignment_cost", params)


def profit(gain, cost=0.0) -> ObjectiveSpec:
    """Maximize total ``gain - cost`` over occupied cells."""
    p, c = _coef(gain), _coef(cost)

    def value(structure, attrs):
        return math.fsum(p(i, j, k) - c(i, j, k) for i, j, k in structure.units())

    params = None
    if p.kind != "function" and c.kind != "function":
        params = {"gain": p.to_json(), "cost": c.to_json()}
    return ObjectiveSpec(Sense.MAX, value, "profit", params)


def used_resources() -> ObjectiveSpec:
    def value(structure, attrs):
        return float(sum(1 for s in structure.assignments if s))

    return ObjectiveSpec(Sense.MIN, value, "used_resources", {})


def makespan(end_attribute: str = "end") -> ObjectiveSpec:
    """Largest value of the named end-time attribute tensor (0 for an empty structure)."""

    def value(structure, attrs):
        ends = attrs[end_attribute]
        return float(max(ends.values(), default=0.0))

    return ObjectiveSpec(Sense.MIN, value, "makespan")


# --------------------------------------------------------------------------
# evaluation counting


class EvaluationCounter:
    """Counts ``evaluate`` calls made inside a ``with`` block (nesting-aware)."""

    _current: contextvars.ContextVar[EvaluationCounter | None] = contextvars.ContextVar(
        "restask_eval_counter", default=None)

    def __init__(self):
        self.count = 0
        self._parent: EvaluationCounter | None = None
        self._token = None

    def __enter__(self):
        self._parent = self._current.get()
        self._token = self._current.set(self)
        return self

    def __exit__(self, *exc):
        self._current.reset(self._token)
        return False

    def bump(self):
        c = self
        while c is not None:
            c.count += 1
            c = c._parent


# --------------------------------------------------------------------------
# model and evaluated solutions


@dataclass(frozen=True)
class EvaluatedSolution:
    structure: SolutionStructure
    objective: float
    violations: tuple[float, ...]
    attributes: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @property
    def feasible(self) -> bool:
        return not any(self.violations)

    @property
    def violation_sum(self) -> float:
        return math.fsum(self.violations)


@dataclass(frozen=True, eq=False)
class ProblemModel:
    resources: tuple[Resource, ...]
    tasks: tuple[Task, ...]
    ordered: bool
    objective: ObjectiveSpec
    constraints: tuple[Constraint, ...] = ()
    attribute_evaluators: tuple[AttributeEvaluator, ...] = ()
    name: str = ""
    interchangeable_resources: bool = False  # resources identical up to relabeling

    def __post_init__(self):
        object.__setattr__(self, "resources", tuple(self.resources))
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "attribute_evaluators", tuple(self.attribute_evaluators))
        if [r.index for r in self.resources] != list(range(1, len(self.resources) + 1)):
            raise InvalidInstance("resource indices must be exactly 1..m in order")
        if [t.index for t in self.tasks] != list(range(1, len(self.tasks) + 1)):
            raise InvalidInstance("task indices must be exactly 1..n in order")
        slices = []
        start = 0
        for c in self.constraints:
            stop = start + c.rows(self)
            slices.append((c, start, stop))
            start = stop
        object.__setattr__(self, "_slices", tuple(slices))
        object.__setattr__(self, "z", start)
        families: dict[Family, list[tuple[int, int]]] = {}
        for c, a, b in slices:
            families.setdefault(c.family, []).append((a, b))
        object.__setattr__(self, "_families", families)

    @property
    def m(self) -> int:
        return len(self.resources)

    @property
    def n(self) -> int:
        return len(self.tasks)

    @property
    def sense(self) -> Sense:
        return self.objective.sense

    def capacity(self, i: int) -> int:
        """Usable positions of resource ``i`` (1-based); unbounded resources get n."""
        cap = self.resources[i - 1].capacity
        return self.n if cap is None else cap

    def constraints_of(self, family: Family) -> list[Constraint]:
        return [c for c in self.constraints if c.family is family]

    def row_slices(self):
        return self._slices

    def family_satisfied(self, violations: Sequence[float], family: Family) -> bool:
        for a, b in self._families.get(family, ()):
            if any(violations[a:b]):
                return False
        return True

    def empty_structure(self) -> SolutionStructure:
        return SolutionStructure.empty(self.m, self.ordered)

    def check(self, structure: SolutionStructure) -> None:
        if structure.m != self.m:
            raise DimensionMismatch(f"structure has {structure.m} resources, model has {self.m}")
        n = self.n
        for i, sub in enumerate(structure.assignments, 1):
            cap = self.resources[i - 1].capacity
            if cap is not None and len(sub) > cap:
                raise DimensionMismatch(f"resource {i} holds {len(sub)} tasks, capacity {cap}")
            for j in sub:
                if not 1 <= j <= n:
                    raise DimensionMismatch(f"unknown task index {j} on resource {i}")

    def evaluate(self, structure: SolutionStructure) -> EvaluatedSolution:
        return evaluate(self, structure)


def evaluate(model: ProblemModel, structure: SolutionStructure) -> EvaluatedSolution:
    """Objective value and violation vector of ``structure`` under ``model``."""
    model.check(structure)
    counter = EvaluationCounter._current.get()
    if counter is not None:
        counter.bump()
    attrs = {ev.name: ev.compute(structure) for ev in model.attribute_evaluators}
    objective = float(model.objective.value(structure, attrs))
    ctx = EvalContext(structure, attrs)
    rows: list[float] = []
    for c in model.constraints:
        rows.extend(c.violations(ctx))
    violations = tuple(0.0 if v < FEASIBILITY_TOL else v for v in rows)
    return EvaluatedSolution(structure, objective, violations, attrs)
