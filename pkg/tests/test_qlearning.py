import math
import random
from collections import Counter

from restask.fixtures import BY_NAME
from restask.model import (
    EvaluatedSolution,
    PairMode,
    Pairing,
    ProblemModel,
    Relation,
    Resource,
    ResourceAggregate,
    SolutionStructure,
    Task,
    TaskAggregate,
    assignment_cost,
    evaluate,
)
from restask.operators import initial_solution
from restask.problems import build_model
from restask.qlearning import (
    REWARDS,
    ZERO_STATE,
    QParams,
    QTable,
    compute_state,
    neighborhood_solution,
    reward,
    select_action,
    top_pool,
    update_q,
)
from restask.model import Sense
from randmodels import well_formed


def unordered_model(m=1, n=3, constraints=()):
    return ProblemModel([Resource(i) for i in range(1, m + 1)], [Task(j) for j in range(1, n + 1)], False,
                        assignment_cost(1.0), constraints)


# --- state -------------------------------------------------------------------

def test_state_of_empty_feasible_single_resource():
    model = unordered_model()
    ev = evaluate(model, model.empty_structure())
    assert compute_state(model, ev, 0) == (1, 1, 1, 1, 1, 1, 1, 1, 1, 2)


def test_state_flags_only_the_violated_family():
    model = unordered_model(2, 3, [ResourceAggregate(1.0, [5, 5]), TaskAggregate(1.0, 1.0, Relation.LE),
                                   Pairing([(1, 2)], PairMode.DIFFERENT_RESOURCE)])
    ev = evaluate(model, SolutionStructure.of([(1, 2), ()], ordered=False))
    s = compute_state(model, ev, 0)
    assert s[2] == 2 and s[5] == 2
    assert s[3] == s[4] == s[6] == s[7] == 1
    assert s[0] == 2 and s[1] == 1


def test_state_load_class_and_stagnation():
    model = unordered_model(1, 6)
    ev = evaluate(model, SolutionStructure.of([(1, 2, 3, 4, 5)], ordered=False))
    assert compute_state(model, ev, 0)[8] == 3
    ev = evaluate(model, SolutionStructure.of([(1, 2)], ordered=False))
    assert compute_state(model, ev, 0)[8] == 2
    assert compute_state(model, ev, 20, threshold=20)[9] == 1
    assert compute_state(model, ev, 19, threshold=20)[9] == 2


# --- reward --------------------------------------------------------------------

def _s(f, *v):
    return EvaluatedSolution(SolutionStructure.empty(1), float(f), tuple(map(float, v)))


def test_reward_branches():
    assert reward(_s(5, 0), _s(3, 0), Sense.MIN) == 2
    assert reward(_s(5, 0), _s(5, 0), Sense.MIN) == 0
    assert reward(_s(5, 0), _s(7, 0), Sense.MIN) == 1  # worse only in objective
    assert reward(_s(5, 0), _s(1, 1), Sense.MIN) == -1  # constraint got worse
    assert reward(_s(5, 0), None, Sense.MIN) == -2
    assert {reward(_s(5, 0), x, Sense.MIN) for x in (_s(3, 0), _s(5, 0), _s(7, 0), _s(1, 1), None)} == set(REWARDS)


def test_reward_stays_in_codomain():
    rng = random.Random(0)
    for _ in range(2000):
        a = _s(rng.randint(0, 5), rng.randint(0, 2), rng.randint(0, 2))
        b = None if rng.random() < 0.1 else _s(rng.randint(0, 5), rng.randint(0, 2), rng.randint(0, 2))
        assert reward(a, b, rng.choice(list(Sense))) in REWARDS


# --- update --------------------------------------------------------------------

def test_update_fixed_points():
    s, s2 = (1,) * 10, (2,) * 10
    t = update_q(QTable(), s, 3, 2.0, s2, alpha=1.0, gamma=0.0)
    assert t.q(s, 3) == 2.0
    before = {k: list(v) for k, v in t.values.items()}
    update_q(t, s, 3, -2.0, s2, alpha=0.0, gamma=0.9)
    assert {k: list(v) for k, v in t.values.items() if k in before} == before


def test_update_arithmetic():
    s, s2 = (1,) * 10, (2,) * 10
    t = QTable()
    t.row(s)[0] = 1.0
    t.row(s2)[4] = 4.0
    update_q(t, s, 0, -1.0, s2, alpha=0.5, gamma=0.5)
    assert t.q(s, 0) == 1.0


def test_gamma_zero_alpha_one_keeps_last_reward():
    t = QTable()
    s = (1,) * 10
    for r in (2, -1, 0, 1):
        update_q(t, s, 5, r, ZERO_STATE, 1.0, 0.0)
        assert t.q(s, 5) == r


# --- selection -----------------------------------------------------------------

def test_uniform_exploration():
    rng = random.Random(0)
    t = QTable()
    s = (1,) * 10
    counts = Counter(select_action(t, s, 1.0, rng) for _ in range(10_000))
    expected = 1000
    chi2 = sum((counts[a] - expected) ** 2 / expected for a in range(10))
    assert chi2 < 27.88  # 99.9% quantile, 9 dof


def test_greedy_picks_the_single_top_action():
    t = QTable(actions=QTable().actions[:5])
    s = (1,) * 10
    t.row(s)[3] = 10.0
    assert top_pool(t, s) == [3]
    rng = random.Random(1)
    assert {select_action(t, s, 0.0, rng) for _ in range(500)} == {3}


def test_success_rate_roulette_ratio():
    t = QTable()
    s = (1,) * 10
    t.row(s)[1] = 5.0
    t.row(s)[7] = 5.0
    t.selected[1], t.success[1] = 10, 9
    t.selected[7], t.success[7] = 10, 1
    rng = random.Random(2)
    counts = Counter(select_action(t, s, 0.0, rng) for _ in range(10_000))
    assert set(counts) == {1, 7}
    assert math.isclose(counts[1] / counts[7], 9.0, rel_tol=0.15)


def test_all_zero_rates_degrade_to_uniform_pool():
    t = QTable()
    s = (1,) * 10
    t.selected = [1] * 10
    rng = random.Random(3)
    picks = Counter(select_action(t, s, 0.0, rng) for _ in range(2000))
    assert set(picks) == set(top_pool(t, s))


def test_greedy_selection_never_leaves_the_pool():
    rng = random.Random(4)
    for _ in range(300):
        t = QTable()
        s = tuple(rng.randint(1, 2) for _ in range(10))
        for a in range(10):
            t.row(s)[a] = rng.choice([0.0, 1.0, 2.0, -1.0])
            t.selected[a] = rng.randint(0, 5)
            t.success[a] = rng.randint(0, t.selected[a])
        pool = set(top_pool(t, s, 0.2))
        assert len(pool) == 2
        assert select_action(t, s, 0.0, rng) in pool


def test_success_counters_reset_after_window():
    t = QTable()
    for _ in range(5):
        t.record(0, True, window=5)
    assert t.selected[0] == 5 and t.success[0] == 5
    t.record(1, False, window=5)
    assert t.selected == [0, 1] + [0] * 8 and t.success == [0] * 10


# --- wrapper -------------------------------------------------------------------

def test_first_call_creates_table():
    model = build_model(BY_NAME["T-GAP-1"].load())
    rng = random.Random(0)
    sol = initial_solution(model, rng)
    out, table = neighborhood_solution(model, sol, None, QParams(), rng)
    assert isinstance(table, QTable)
    assert sum(table.selected) == 1


def test_unreachable_returns_input_with_penalty():
    model = unordered_model(1, 2)  # single unordered resource: every intra/inter move is unreachable
    sol = evaluate(model, SolutionStructure.of([(1, 2)], ordered=False))
    table = QTable(actions=QTable().actions[:5])  # pool of one
    s = compute_state(model, sol, 0)
    for a in range(5):
        table.row(s)[a] = 0.0 if a == 1 else -5.0  # force SWAP_INTER
    out, table = neighborhood_solution(model, sol, table, QParams(epsilon=0.0), random.Random(0))
    assert out is sol
    assert table.q(s, 1) == 0.1 * (-2 + 0.9 * 0.0)


def test_chained_calls_stay_well_formed():
    model = build_model(BY_NAME["T-GC-1"].load())
    rng = random.Random(7)
    sol = initial_solution(model, rng)
    table = None
    for _ in range(1000):
        sol, table = neighborhood_solution(model, sol, table, QParams(), rng)
        assert well_formed(model, sol.structure)
    assert all(sc <= st for sc, st in zip(table.success, table.selected))
