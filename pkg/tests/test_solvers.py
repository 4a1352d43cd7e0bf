import random
from dataclasses import replace

import pytest

from restask.errors import InvalidConfig
from restask.fixtures import BY_NAME
from restask.model import ProblemModel, Resource, Sense, assignment_cost
from restask.qlearning import QParams
from restask.ranking import Comparison, compare
from restask.solvers import VARIANTS, SolverConfig, run_ga, run_single_point, solve
from randmodels import well_formed


def fixture_model(name):
    return BY_NAME[name].model()


@pytest.mark.parametrize("bad", [
    dict(variant="hc"), dict(time_limit=0), dict(n_candidates=0), dict(perturb_after=0),
    dict(variant="ga", popsize=1), dict(cooling=1.0), dict(p_c=1.5), dict(max_evaluations=0),
    dict(q=QParams(alpha=0.0)), dict(q=QParams(selection="greedy")),
])
def test_config_validation(bad):
    with pytest.raises(InvalidConfig):
        SolverConfig(**bad).validate()


def test_wrong_runner_for_variant():
    model = fixture_model("T-GAP-1")
    with pytest.raises(InvalidConfig):
        run_ga(model, SolverConfig(variant="sa"))
    with pytest.raises(InvalidConfig):
        run_single_point(model, SolverConfig(variant="ga"))


@pytest.mark.parametrize("variant", VARIANTS)
def test_zero_task_model(variant):
    model = ProblemModel([Resource(1)], [], True, assignment_cost(1.0), [])
    rep = solve(model, SolverConfig(variant=variant, time_limit=1))
    assert rep.best.structure.total_assigned() == 0
    assert len(rep.trace) >= 1


@pytest.mark.parametrize("variant", VARIANTS)
def test_reaches_tiny_gap_optimum(variant):
    model = fixture_model("T-GAP-1")
    hits = 0
    for seed in range(5):
        rep = solve(model, SolverConfig(variant=variant, time_limit=5, seed=seed,
                                        target=BY_NAME["T-GAP-1"].optimum))
        hits += rep.best.feasible and rep.best.objective == BY_NAME["T-GAP-1"].optimum
    assert hits >= 4


def test_ga_colors_tiny_graph_optimally():
    fx = BY_NAME["T-GC-1"]
    model = fixture_model("T-GC-1")
    hits = sum(
        (r := run_ga(model, SolverConfig(variant="ga", time_limit=5, seed=s, target=fx.optimum))).best.feasible
        and r.best.objective == fx.optimum
        for s in range(5)
    )
    assert hits >= 4


def test_stagnation_triggers_perturbation():
    model = fixture_model("T-GAP-1")
    rep = run_single_point(model, SolverConfig(variant="sa", perturb_after=3, max_iterations=40, time_limit=30))
    assert rep.perturbations > 0
    assert sum(p.event == "perturb" for p in rep.trace) == rep.perturbations


@pytest.mark.parametrize("variant", VARIANTS)
def test_best_never_worsens(variant):
    model = fixture_model("M-VRPTW-1")
    rep = solve(model, SolverConfig(variant=variant, max_iterations=15, time_limit=60, perturb_after=4))
    sense = model.sense
    # rebuild the incumbent sequence from the trace and check it is monotone
    points = [(p.violation_sum, p.best_objective) for p in rep.trace]
    for (v0, f0), (v1, f1) in zip(points, points[1:]):
        if v0 == 0:
            assert v1 == 0
            assert f1 <= f0 if sense is Sense.MIN else f1 >= f0
    assert well_formed(model, rep.best.structure)


@pytest.mark.parametrize("variant", VARIANTS)
def test_deterministic_under_evaluation_budget(variant):
    model = fixture_model("M-GAP-1")
    cfg = SolverConfig(variant=variant, max_evaluations=3000, time_limit=120, seed=3)
    a, b = solve(model, cfg), solve(model, cfg)
    assert a.deterministic_trace() == b.deterministic_trace()
    assert a.best.structure == b.best.structure
    assert a.evaluations == b.evaluations


def test_evaluation_budget_overrun_is_one_iteration():
    model = fixture_model("M-GAP-1")
    cfg = SolverConfig(variant="sa", max_evaluations=500, time_limit=120)
    rep = solve(model, cfg)
    assert rep.evaluations >= 500
    one_more = solve(model, replace(cfg, max_evaluations=None, max_iterations=rep.iterations))
    assert one_more.evaluations == rep.evaluations


def test_time_limit_respected():
    model = fixture_model("M-JSSP-1")
    rep = solve(model, SolverConfig(variant="vns", time_limit=0.5))
    assert rep.elapsed < 0.5 + 1.0


def test_ga_without_variation_keeps_population_members():
    model = fixture_model("T-GAP-1")
    cfg = SolverConfig(variant="ga", p_c=0.0, p_m=0.0, max_iterations=10, time_limit=30)
    rep = run_ga(model, cfg, random.Random(4))
    # nothing new can appear: the incumbent is the best initial individual
    init = next(p for p in rep.trace if p.event == "init")
    assert all(p.event in ("init", "final") for p in rep.trace)
    assert rep.trace[-1].best_objective == init.best_objective


def test_ga_elitism():
    # the generation-best of parents+offspring always survives
    model = fixture_model("T-BPPC-1")
    import restask.solvers as solvers

    seen = []
    original = solvers.rank_solutions

    def spy(pop, sense=Sense.MIN):
        ranks = original(pop, sense)
        seen.append(pop[ranks[0].index])
        return ranks

    solvers.rank_solutions = spy
    try:
        rep = run_ga(model, SolverConfig(variant="ga", max_iterations=20, time_limit=30))
    finally:
        solvers.rank_solutions = original
    assert seen
    # the best mixed individual of each generation is never beaten by a later incumbent loss
    for earlier, later in zip(seen, seen[1:]):
        assert compare(later, earlier, model.sense) is not Comparison.WORSE
    assert compare(rep.best, seen[-1], model.sense) is not Comparison.WORSE
