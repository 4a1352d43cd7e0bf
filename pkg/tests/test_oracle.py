"""Independent enumerators for the tiny fixtures.

Each hand enumerator works directly on the parsed instance data and shares no
code with the models, the evaluator or the generic oracle.
"""

import itertools
import math

import pytest

from restask.errors import TooLarge
from restask.fixtures import BY_NAME, TINY
from restask.model import ProblemModel, Resource, Task, TaskAggregate, Relation, assignment_cost, evaluate
from restask.oracle import brute_force_oracle, enumeration_size, structures


def gap_by_hand(inst):
    best = math.inf
    for agents in itertools.product(range(inst.m), repeat=inst.n):
        load = [0] * inst.m
        for j, i in enumerate(agents):
            load[i] += inst.demand[i][j]
        if all(l <= c for l, c in zip(load, inst.capacities)):
            best = min(best, sum(inst.cost[i][j] for j, i in enumerate(agents)))
    return best


def bppc_by_hand(inst):
    n = inst.n
    best = math.inf
    for bins in itertools.product(range(n), repeat=n):
        load = [0] * n
        for j, b in enumerate(bins):
            load[b] += inst.sizes[j]
        if max(load) > inst.capacity:
            continue
        if any(bins[a - 1] == bins[b - 1] for a, b in inst.conflicts):
            continue
        best = min(best, len(set(bins)))
    return best


def chromatic_by_hand(n, edges):
    for k in range(1, n + 1):
        for col in itertools.product(range(k), repeat=n):
            if all(col[a - 1] != col[b - 1] for a, b in edges):
                return k
    return n


def jssp_by_hand(inst):
    """Minimum makespan over all machine sequences, via longest paths in the disjunctive graph."""
    ops = [(j, o) for j in range(inst.n_jobs) for o in range(inst.n_ops)]
    by_machine = {}
    for j, o in ops:
        by_machine.setdefault(inst.machines[j][o], []).append((j, o))
    best = math.inf
    for seqs in itertools.product(*(itertools.permutations(v) for v in by_machine.values())):
        preds = {op: [] for op in ops}
        for j in range(inst.n_jobs):
            for o in range(1, inst.n_ops):
                preds[(j, o)].append((j, o - 1))
        for seq in seqs:
            for a, b in zip(seq, seq[1:]):
                preds[b].append(a)
        end, state = {}, {}

        def finish(op):
            if state.get(op) == 1:
                raise ValueError("cycle")
            if op not in end:
                state[op] = 1
                s = max((finish(p) for p in preds[op]), default=0)
                end[op] = s + inst.durations[op[0]][op[1]]
                state[op] = 2
            return end[op]

        try:
            best = min(best, max(finish(op) for op in ops))
        except ValueError:
            continue
    return best


def vrptw_by_hand(inst):
    """Single-vehicle fixture: every customer order with waiting on early arrival."""
    t = inst.travel
    best = math.inf
    if sum(inst.demand[1:]) > inst.capacity:
        return best
    for order in itertools.permutations(range(1, inst.n + 1)):
        clock, prev, dist, ok = inst.ready[0], 0, 0.0, True
        for j in order:
            arrive = clock + t[prev][j]
            if arrive > inst.due[j]:
                ok = False
                break
            clock = max(arrive, inst.ready[j]) + inst.service[j]
            dist += t[prev][j]
            prev = j
        dist += t[prev][0]
        if ok and clock + t[prev][0] <= inst.due[0]:
            best = min(best, dist)
    return best


def by_hand(fx):
    inst = fx.load()
    return {
        "gap": gap_by_hand,
        "bppc": bppc_by_hand,
        "gc": lambda i: chromatic_by_hand(i.n_nodes, i.edges),
        "jssp": jssp_by_hand,
        "vrptw": vrptw_by_hand,
    }[fx.problem](inst)


@pytest.mark.parametrize("fx", TINY, ids=lambda f: f.name)
def test_hand_enumerator_matches_frozen_optimum(fx):
    assert by_hand(fx) == pytest.approx(fx.optimum, abs=1e-9)


@pytest.mark.parametrize("fx", TINY, ids=lambda f: f.name)
def test_oracle_matches_hand_enumerator(fx):
    model = fx.model()
    res = brute_force_oracle(model)
    assert res.feasible
    assert res.objective == pytest.approx(by_hand(fx), abs=1e-9)
    # re-evaluating the returned structure reproduces the value exactly
    assert evaluate(model, res.structure).objective == res.objective


@pytest.mark.parametrize("fx", TINY, ids=lambda f: f.name)
def test_enumeration_size_matches_count(fx):
    model = fx.model()
    assert enumeration_size(model) == sum(1 for _ in structures(model)) == brute_force_oracle(model).count


def test_single_resource_single_task():
    model = ProblemModel([Resource(1)], [Task(1)], True, assignment_cost(4.0),
                         [TaskAggregate(1.0, 1.0, Relation.EQ)])
    res = brute_force_oracle(model)
    assert res.count == 2
    assert res.structure.assignments == ((1,),)
    assert res.objective == 4.0


def test_refuses_large_spaces():
    model = BY_NAME["M-GAP-1"].model()
    with pytest.raises(TooLarge):
        brute_force_oracle(model)
    with pytest.raises(TooLarge):
        brute_force_oracle(BY_NAME["T-GC-1"].model(), limit=10)
