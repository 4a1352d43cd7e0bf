"""Metaheuristics built from the shared operators.

SA, TS, VNS and LNS run inside one single-point loop: build ``N`` candidates
from the current solution, keep the best, update the incumbent, accept by the
variant's rule, and perturb after ``perturb_after`` outer iterations without
improvement.  GA is population based.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace

from restask.errors import InvalidConfig
from restask.model import EvaluatedSolution, EvaluationCounter, ProblemModel, Sense, evaluate
from restask.operators import (
    crossover_operation,
    destroy_repair,
    initial_solution,
    tournament,
)
from restask.qlearning import QParams, QTable, neighborhood_solution
from restask.ranking import Comparison, best_of, compare, dominates, is_better, rank_solutions

VARIANTS = ("sa", "ts", "vns", "lns", "ga")


@dataclass(frozen=True)
class SolverConfig:
    variant: str = "vns"
    time_limit: float = 5.0
    seed: int = 0
    max_evaluations: int | None = None
    max_iterations: int | None = None  # outer iterations (generations for GA)
    target: float | None = None  # stop once a feasible incumbent reaches this value
    n_candidates: int = 5
    perturb_after: int = 50
    # SA
    initial_temperature: float | None = None  # None: 0.1 * |f(initial)| + 1
    cooling: float = 0.95
    # TS
    tenure_max: int | None = None  # None: ceil(0.3 n) + 1
    tenure_min: int = 1
    # VNS: neighborhood k chains k moves
    vns_depth: int = 3
    # LNS
    nd_max: int | None = None  # None: ceil(0.3 n)
    nd_min: int = 1
    # GA
    popsize: int = 10
    p_c: float = 0.9
    p_m: float = 0.2
    q: QParams = field(default_factory=QParams)

    def validate(self) -> SolverConfig:
        if self.variant not in VARIANTS:
            raise InvalidConfig(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if not self.time_limit > 0:
            raise InvalidConfig("time_limit must be > 0")
        if self.n_candidates < 1:
            raise InvalidConfig("n_candidates must be >= 1")
        if self.perturb_after < 1:
            raise InvalidConfig("perturb_after must be >= 1")
        if self.variant == "ga" and self.popsize < 2:
            raise InvalidConfig("popsize must be >= 2")
        if not 0 < self.cooling < 1:
            raise InvalidConfig("cooling must be in (0, 1)")
        if self.vns_depth < 1 or self.nd_min < 0 or self.tenure_min < 0:
            raise InvalidConfig("vns_depth >= 1, nd_min >= 0 and tenure_min >= 0 required")
        if not (0 <= self.p_c <= 1 and 0 <= self.p_m <= 1):
            raise InvalidConfig("p_c and p_m must be probabilities")
        if not (0 < self.q.alpha <= 1 and 0 <= self.q.gamma < 1 and 0 <= self.q.epsilon <= 1):
            raise InvalidConfig("need alpha in (0,1], gamma in [0,1), epsilon in [0,1]")
        if self.q.selection not in ("q", "adaptive", "random"):
            raise InvalidConfig(f"unknown selection {self.q.selection!r}")
        for name in ("max_evaluations", "max_iterations"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InvalidConfig(f"{name} must be >= 1")
        return self


@dataclass(frozen=True)
class TracePoint:
    elapsed: float
    evaluations: int
    iteration: int
    best_objective: float
    violation_sum: float
    event: str  # init | improve | perturb | final


@dataclass
class RunReport:
    variant: str
    seed: int
    best: EvaluatedSolution
    trace: list[TracePoint]
    evaluations: int
    iterations: int
    elapsed: float
    perturbations: int = 0
    q_table: QTable | None = None

    def deterministic_trace(self):
        return [(p.evaluations, p.iteration, p.best_objective, p.violation_sum, p.event) for p in self.trace]


class _Run:
    """Budget, incumbent and trace bookkeeping shared by all variants."""

    def __init__(self, model: ProblemModel, config: SolverConfig, counter: EvaluationCounter):
        self.model = model
        self.config = config
        self.counter = counter
        self.t0 = time.perf_counter()
        self.iteration = 0
        self.best: EvaluatedSolution | None = None
        self.trace: list[TracePoint] = []
        self.perturbations = 0

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0

    def progress(self) -> float:
        c = self.config
        if c.max_evaluations is not None:
            frac = self.counter.count / c.max_evaluations
        elif c.max_iterations is not None:
            frac = self.iteration / c.max_iterations
        else:
            frac = self.elapsed() / c.time_limit
        return min(1.0, max(0.0, frac))

    def target_reached(self) -> bool:
        t = self.config.target
        if t is None or self.best is None or not self.best.feasible:
            return False
        f = self.best.objective
        return f <= t if self.model.sense is Sense.MIN else f >= t

    def done(self) -> bool:
        c = self.config
        if c.max_evaluations is not None and self.counter.count >= c.max_evaluations:
            return True
        if c.max_iterations is not None and self.iteration >= c.max_iterations:
            return True
        return self.target_reached() or self.elapsed() >= c.time_limit

    def log(self, event: str) -> None:
        b = self.best
        self.trace.append(TracePoint(self.elapsed(), self.counter.count, self.iteration,
                                     b.objective, b.violation_sum, event))

    def offer(self, sol: EvaluatedSolution) -> bool:
        if self.best is None:
            self.best = sol
            self.log("init")
            return True
        if is_better(sol, self.best, self.model.sense):
            self.best = sol
            self.log("improve")
            return True
        return False

    def report(self, table: QTable | None = None) -> RunReport:
        self.log("final")
        return RunReport(self.config.variant, self.config.seed, self.best, self.trace, self.counter.count,
                         self.iteration, self.elapsed(), self.perturbations, table)


def _annealed(hi: int, lo: int, progress: float) -> int:
    return max(lo, int(round(hi - (hi - lo) * progress)))


def _placements(sol: EvaluatedSolution) -> set[tuple[int, int]]:
    return {(j, i) for i, j, _ in sol.structure.units()}


def run_single_point(model: ProblemModel, config: SolverConfig, rng: random.Random | None = None) -> RunReport:
    config.validate()
    if config.variant == "ga":
        raise InvalidConfig("use run_ga for the genetic algorithm")
    rng = rng if rng is not None else random.Random(config.seed)
    sense = model.sense
    with EvaluationCounter() as counter:
        run = _Run(model, config, counter)
        if model.n == 0:
            run.offer(evaluate(model, model.empty_structure()))
            return run.report()

        current = initial_solution(model, rng)
        run.offer(current)
        table: QTable | None = None
        no_improve = 0
        variant = config.variant

        temperature = config.initial_temperature
        if temperature is None:
            temperature = 0.1 * abs(current.objective) + 1.0
        tenure_max = config.tenure_max if config.tenure_max is not None else math.ceil(0.3 * model.n) + 1
        tabu: dict[tuple[int, int], int] = {}
        nd_max = config.nd_max if config.nd_max is not None else max(1, math.ceil(0.3 * model.n))
        depth = 1

        def neighbor(sol):
            nonlocal table
            out, table = neighborhood_solution(model, sol, table, config.q, rng)
            return out

        while not run.done():
            if variant == "lns":
                nd = _annealed(nd_max, config.nd_min, run.progress())
                cands = [destroy_repair(model, current, nd, rng) for _ in range(config.n_candidates)]
            elif variant == "vns":
                cands = []
                for _ in range(config.n_candidates):
                    x = current
                    for _ in range(depth):
                        x = neighbor(x)
                    cands.append(x)
            else:
                cands = [neighbor(current) for _ in range(config.n_candidates)]

            if variant == "ts":
                now = run.iteration
                held = _placements(current)

                def admissible(c):
                    fresh = _placements(c) - held
                    if not any(tabu.get(p, -1) > now for p in fresh):
                        return True
                    return is_better(c, run.best, sense)

                pool = [c for c in cands if admissible(c)] or cands
                sub = best_of(pool, sense)
            else:
                sub = best_of(cands, sense)

            improved = run.offer(sub)
            no_improve = 0 if improved else no_improve + 1
            run.iteration += 1

            if variant == "sa":
                current = _metropolis(current, sub, temperature, sense, rng)
                temperature *= config.cooling
            elif variant == "ts":
                tenure = _annealed(tenure_max, config.tenure_min, run.progress())
                for p in _placements(current) - _placements(sub):
                    tabu[p] = run.iteration + tenure
                current = sub
            elif variant == "vns":
                c = compare(sub, current, sense)
                if c is Comparison.BETTER:
                    current, depth = sub, 1
                else:
                    if c is Comparison.EQUAL:
                        current = sub
                    depth = depth % config.vns_depth + 1
            elif compare(sub, current, sense) is not Comparison.WORSE:
                current = sub

            if no_improve >= config.perturb_after:
                nd = math.ceil(0.5 * current.structure.total_assigned())
                current = destroy_repair(model, current, nd, rng)
                run.perturbations += 1
                no_improve = 0
                run.offer(current)
                run.log("perturb")
        return run.report(table)


def _metropolis(current: EvaluatedSolution, cand: EvaluatedSolution, temperature: float, sense: Sense,
                rng: random.Random) -> EvaluatedSolution:
    if compare(cand, current, sense) is not Comparison.WORSE:
        return cand
    if cand.feasible and current.feasible:
        delta = abs(cand.objective - current.objective)
    elif not cand.feasible and not current.feasible and not dominates(current.violations, cand.violations):
        return cand
    else:
        delta = cand.violation_sum - current.violation_sum
    if delta <= 0:
        return cand
    if temperature > 0 and rng.random() < math.exp(-delta / temperature):
        return cand
    return current


def run_ga(model: ProblemModel, config: SolverConfig, rng: random.Random | None = None) -> RunReport:
    config.validate()
    if config.variant != "ga":
        raise InvalidConfig("run_ga needs variant 'ga'")
    rng = rng if rng is not None else random.Random(config.seed)
    sense = model.sense
    mutation = replace(config.q, selection="random")
    with EvaluationCounter() as counter:
        run = _Run(model, config, counter)
        if model.n == 0:
            run.offer(evaluate(model, model.empty_structure()))
            return run.report()

        pop = [initial_solution(model, rng) for _ in range(config.popsize)]
        run.offer(best_of(pop, sense))
        table: QTable | None = None
        while not run.done():
            offspring = crossover_operation(model, pop, config.p_c, rng)
            for i in range(len(offspring)):
                if rng.random() < config.p_m:
                    offspring[i], table = neighborhood_solution(model, offspring[i], table, mutation, rng)
            mix = pop + offspring
            ranks = rank_solutions(mix, sense)
            run.offer(mix[ranks[0].index])
            elite = math.ceil(0.1 * len(mix))
            nxt = [mix[r.index] for r in ranks[:elite]]
            everyone = list(range(len(mix)))
            while len(nxt) < config.popsize:
                nxt.append(mix[tournament(model, mix, everyone, rng)])
            pop = nxt
            run.iteration += 1
        return run.report(table)


def solve(model: ProblemModel, config: SolverConfig, rng: random.Random | None = None) -> RunReport:
    if config.variant == "ga":
        return run_ga(model, config, rng)
    return run_single_point(model, config, rng)

