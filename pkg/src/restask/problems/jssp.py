"""Job-shop scheduling: machines are ordered resources, operations are tasks.

Operation ``o`` (0-based) of job ``j`` (0-based) is task ``j * ops + o + 1``.
A machine sequence is decoded into start times by list scheduling; when the
sequences deadlock, the first blocked operation is forced and the resulting
job-order inversion is reported as a violation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from restask.errors import InvalidInstance
from restask.model import (
    AttributeEvaluator,
    CustomConstraint,
    ObjectiveSpec,
    ProblemModel,
    Relation,
    Resource,
    ResourceTaskAggregate,
    Sense,
    SolutionStructure,
    Task,
    TaskAggregate,
)


@dataclass(frozen=True)
class JsspInstance:
    durations: tuple[tuple[float, ...], ...]  # [job][op]
    machines: tuple[tuple[int, ...], ...]  # [job][op], 1-based machine ids
    name: str = "jssp"

    def __post_init__(self):
        if len(self.durations) != len(self.machines):
            raise InvalidInstance("durations and machines need one row per job")
        if not self.durations:
            raise InvalidInstance("JSSP needs at least one job")
        ops = len(self.durations[0])
        if ops == 0:
            raise InvalidInstance("jobs need at least one operation")
        for d, mc in zip(self.durations, self.machines):
            if len(d) != ops or len(mc) != ops:
                raise InvalidInstance("every job needs the same number of operations")
            if any(x < 0 for x in d):
                raise InvalidInstance("negative processing time")
            if len(set(mc)) != len(mc):
                raise InvalidInstance("a job visits a machine twice")
            if any(not 1 <= x <= self.n_machines for x in mc):
                raise InvalidInstance("machine id out of range")

    @property
    def n_jobs(self) -> int:
        return len(self.durations)

    @property
    def n_ops(self) -> int:
        return len(self.durations[0])

    @property
    def n_machines(self) -> int:
        return max(max(r) for r in self.machines) if self.machines else 0

    def task(self, job: int, op: int) -> int:
        return job * self.n_ops + op + 1

    def job_op(self, task: int) -> tuple[int, int]:
        return divmod(task - 1, self.n_ops)


@dataclass(frozen=True)
class Schedule:
    start: dict[int, float]  # task -> start of its first occurrence
    end: dict[int, float]
    inversions: tuple[int, ...]  # per job


def list_schedule(inst: JsspInstance, structure: SolutionStructure) -> Schedule:
    ops = inst.n_ops
    assigned = {j for sub in structure.assignments for j in sub}

    def pred(t):
        job, op = inst.job_op(t)
        for o in range(op - 1, -1, -1):
            p = job * ops + o + 1
            if p in assigned:
                return p
        return None

    start: dict[int, float] = {}
    end: dict[int, float] = {}
    job_end = [0.0] * inst.n_jobs
    ready = [0.0] * structure.m
    ptr = [0] * structure.m
    remaining = structure.total_assigned()

    def place(i, t, earliest):
        job, op = inst.job_op(t)
        s = max(ready[i], earliest)
        e = s + inst.durations[job][op]
        ready[i] = e
        if t not in start:
            start[t], end[t] = s, e
            job_end[job] = max(job_end[job], e)
        ptr[i] += 1

    while remaining:
        progressed = False
        for i, sub in enumerate(structure.assignments):
            while ptr[i] < len(sub):
                t = sub[ptr[i]]
                p = pred(t)
                if p is not None and p not in end:
                    break
                place(i, t, end[p] if p is not None else 0.0)
                remaining -= 1
                progressed = True
        if not progressed:
            i = next(i for i, sub in enumerate(structure.assignments) if ptr[i] < len(sub))
            t = structure.assignments[i][ptr[i]]
            place(i, t, job_end[inst.job_op(t)[0]])
            remaining -= 1

    inversions = []
    for job in range(inst.n_jobs):
        seq = [job * ops + o + 1 for o in range(ops) if job * ops + o + 1 in start]
        inversions.append(sum(1 for a, b in zip(seq, seq[1:]) if start[b] < end[a] - 1e-9))
    return Schedule(start, end, tuple(inversions))


def model_jssp(inst: JsspInstance) -> ProblemModel:
    M, n = inst.n_machines, inst.n_jobs * inst.n_ops
    tasks = []
    for job in range(inst.n_jobs):
        for op in range(inst.n_ops):
            tasks.append(Task(inst.task(job, op), {
                "job": job + 1, "op": op + 1,
                "machine": inst.machines[job][op], "duration": inst.durations[job][op],
            }))
    eligible = [[None if t.attributes["machine"] == i else 0.0 for t in tasks] for i in range(1, M + 1)]

    def makespan(structure, attrs):
        return float(max(attrs["schedule"].end.values(), default=0.0))

    return ProblemModel(
        resources=[Resource(i) for i in range(1, M + 1)],
        tasks=tasks,
        ordered=True,
        objective=ObjectiveSpec(Sense.MIN, makespan, "makespan"),
        constraints=[
            TaskAggregate(1.0, 1.0, Relation.EQ, "schedule_once"),
            ResourceTaskAggregate(1.0, eligible, Relation.LE, "eligibility"),
            CustomConstraint(lambda s, a: a["schedule"].inversions, inst.n_jobs, name="job_order"),
        ],
        attribute_evaluators=[AttributeEvaluator("schedule", lambda s: list_schedule(inst, s))],
        name=inst.name,
    )


def lower_bound(inst: JsspInstance) -> float:
    loads = [0.0] * (inst.n_machines + 1)
    for d, mc in zip(inst.durations, inst.machines):
        for x, k in zip(d, mc):
            loads[k] += x
    return float(max(max(loads), max(sum(d) for d in inst.durations)))


def random_jssp(rng: random.Random, jobs: int, machines: int, name: str = "jssp") -> JsspInstance:
    """Taillard-style: times uniform in 1..99, random machine permutation per job."""
    durations = tuple(tuple(float(rng.randint(1, 99)) for _ in range(machines)) for _ in range(jobs))
    routes = []
    for _ in range(jobs):
        perm = list(range(1, machines + 1))
        rng.shuffle(perm)
        routes.append(tuple(perm))
    return JsspInstance(durations, tuple(routes), name)
