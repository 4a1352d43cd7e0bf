import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restask.errors import LengthMismatch
from restask.model import EvaluatedSolution, Sense, SolutionStructure
from restask.ranking import Comparison, best_of, compare, dominates, order, rank_solutions

EMPTY = SolutionStructure.empty(1)


def sol(f, *viol):
    return EvaluatedSolution(EMPTY, float(f), tuple(float(v) for v in viol))


def test_dominance_examples():
    assert dominates((0, 1), (0, 2))
    assert not dominates((1, 0), (0, 1)) and not dominates((0, 1), (1, 0))
    assert not dominates((1, 2), (1, 2))
    with pytest.raises(LengthMismatch):
        dominates((0,), (0, 1))


def test_compare_examples():
    assert compare(sol(100, 0, 0), sol(1, 1, 0)) is Comparison.BETTER
    assert compare(sol(3, 0), sol(5, 0)) is Comparison.BETTER
    assert compare(sol(3, 1, 0), sol(5, 0, 1)) is Comparison.BETTER
    assert compare(sol(9, 0, 1), sol(1, 0, 2)) is Comparison.BETTER  # dominance decides
    assert compare(sol(4, 1), sol(4, 1)) is Comparison.EQUAL
    assert compare(sol(3, 0), sol(5, 0), Sense.MAX) is Comparison.WORSE


def test_rank_all_feasible_sorts_by_objective():
    pop = [sol(5, 0), sol(2, 0), sol(9, 0), sol(2, 0)]
    assert order(pop) == [1, 3, 0, 2]
    assert order(pop, Sense.MAX) == [2, 0, 1, 3]


def test_rank_feasible_first():
    pop = [sol(1, 3), sol(1000, 0)]
    ranks = rank_solutions(pop)
    assert [r.index for r in ranks] == [1, 0]
    assert ranks[0].layer == 0 and ranks[1].layer >= 1


def test_rank_layers_by_dominance_count():
    # a dominates b and c, b dominates c
    a, b, c = sol(50, 1, 1), sol(10, 2, 2), sol(1, 3, 3)
    ranks = rank_solutions([c, a, b])
    assert [r.index for r in ranks] == [1, 2, 0]
    assert [r.layer for r in ranks] == [1, 2, 3]


def _brute_counts(pop):
    inf = [i for i, s in enumerate(pop) if not s.feasible]
    return {i: sum(dominates(pop[i].violations, pop[k].violations) for k in inf if k != i) for i in inf}


vec = st.lists(st.integers(0, 3), min_size=3, max_size=3)
solution = st.builds(lambda f, v: sol(f, *v), st.integers(-20, 20), vec)


@given(st.lists(solution, min_size=1, max_size=12), st.sampled_from([Sense.MIN, Sense.MAX]))
def test_rank_matches_brute_force_layering(pop, sense):
    ranks = rank_solutions(pop, sense)
    assert sorted(r.index for r in ranks) == list(range(len(pop)))
    counts = _brute_counts(pop)
    keyed = [r.index for r in ranks]
    feasible = [i for i in keyed if pop[i].feasible]
    assert keyed[:len(feasible)] == feasible
    infeasible = keyed[len(feasible):]
    assert [counts[i] for i in infeasible] == sorted((counts[i] for i in infeasible), reverse=True)


@given(solution, solution, st.sampled_from([Sense.MIN, Sense.MAX]))
def test_compare_antisymmetric(a, b, sense):
    assert compare(a, b, sense) == compare(b, a, sense).flip()
    assert compare(a, a, sense) is Comparison.EQUAL


@given(vec, vec, vec)
def test_dominance_is_a_strict_partial_order(a, b, c):
    assert not dominates(a, a)
    assert not (dominates(a, b) and dominates(b, a))
    if dominates(a, b) and dominates(b, c):
        assert dominates(a, c)


@given(st.lists(solution, min_size=1, max_size=10), st.floats(0.01, 100))
def test_positive_scaling_keeps_order(pop, scale):
    scaled = [EvaluatedSolution(s.structure, s.objective * scale, s.violations) for s in pop]
    assert order(pop) == order(scaled)


def test_best_of_agrees_with_pairwise_compare():
    rng = random.Random(1)
    for _ in range(300):
        pop = [sol(rng.randint(0, 9), *(rng.randint(0, 2) for _ in range(2))) for _ in range(rng.randint(1, 6))]
        best = best_of(pop)
        assert all(compare(other, best) is not Comparison.BETTER for other in pop if other.feasible or best.feasible
                   or dominates(other.violations, best.violations))


def test_feasible_pairs_follow_compare():
    rng = random.Random(2)
    for _ in range(200):
        pop = [sol(rng.randint(0, 9), 0) for _ in range(5)]
        pos = {idx: p for p, idx in enumerate(order(pop))}
        for i, j in itertools.permutations(range(5), 2):
            if compare(pop[i], pop[j]) is Comparison.BETTER:
                assert pos[i] < pos[j]
