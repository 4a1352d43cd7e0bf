"""Seeded multi-run experiments.

A run of ``run_experiment`` solves every (instance, algorithm, run) cell with
seed ``seed + run_index`` and writes into the output directory:

- ``results.csv`` / ``results.json``: one aggregate row per instance and
  algorithm.  These hold no wall-clock values, so under an evaluation or
  iteration budget two executions produce identical bytes.
- ``timing.csv``: mean wall-clock seconds per row.
- ``traces/<instance>__<algorithm>__run<k>.csv``: incumbent trace with
  columns ``elapsed_ms, evaluations, best_objective, violation_sum``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from restask.errors import InvalidConfig, RestaskError
from restask.fixtures import BY_NAME as FIXTURES
from restask.formats import PROBLEM_FORMATS, parse_instance
from restask.model import Sense
from restask.problems import build_model, lower_bound
from restask.qlearning import QParams
from restask.ranking import best_of
from restask.solvers import VARIANTS, SolverConfig, solve

# algorithm name -> (variant, neighborhood selection)
ALGORITHMS = {v: (v, "q") for v in VARIANTS}
ALGORITHMS.update({"qvns": ("vns", "q"), "avns": ("vns", "adaptive"), "rvns": ("vns", "random")})


def compute_gap(objective: float, bound: float, sense: Sense = Sense.MIN) -> float:
    """Relative distance to a bound; the denominator is clamped at 1."""
    diff = objective - bound if Sense(sense) is Sense.MIN else bound - objective
    return diff / max(abs(bound), 1.0)


@dataclass(frozen=True)
class InstanceSpec:
    path: str  # file path, or "fixture:<name>"
    problem: str | None = None
    fmt: str | None = None

    @property
    def id(self) -> str:
        if self.path.startswith("fixture:"):
            return self.path.split(":", 1)[1]
        return Path(self.path).stem

    def load(self):
        if self.path.startswith("fixture:"):
            name = self.id
            if name not in FIXTURES:
                raise InvalidConfig(f"unknown fixture {name!r}")
            return FIXTURES[name].load()
        fmt = self.fmt or PROBLEM_FORMATS.get(self.problem or "")
        if fmt is None:
            raise InvalidConfig(f"{self.path}: give a problem kind or a format")
        return parse_instance(self.path, fmt)


@dataclass(frozen=True)
class ExperimentConfig:
    instances: tuple[InstanceSpec, ...]
    algorithms: tuple[str, ...] = ("vns",)
    runs: int = 5
    time_limit: float = 5.0
    seed: int = 0
    out: str = "results"
    max_evaluations: int | None = None
    max_iterations: int | None = None
    lower_bounds: dict[str, float] = field(default_factory=dict)
    stop_at_bound: bool = False  # stop a run once a feasible incumbent reaches the bound
    workers: int = 1

    def validate(self) -> ExperimentConfig:
        if not self.instances:
            raise InvalidConfig("no instances")
        if self.runs < 1:
            raise InvalidConfig("runs must be >= 1")
        if not self.time_limit > 0:
            raise InvalidConfig("time_limit must be > 0")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise InvalidConfig(f"unknown algorithm {a!r}; expected one of {sorted(ALGORITHMS)}")
        for name in ("max_evaluations", "max_iterations"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InvalidConfig(f"{name} must be >= 1")
        ids = [s.id for s in self.instances]
        if len(set(ids)) != len(ids):
            raise InvalidConfig("instance ids must be unique")
        return self

    @classmethod
    def from_dict(cls, d: dict, base: Path | None = None) -> ExperimentConfig:
        known = {"problem", "format", "instances", "algorithms", "runs", "time_limit", "seed", "out",
                 "max_evaluations", "max_iterations", "lower_bounds", "stop_at_bound", "workers"}
        extra = set(d) - known
        if extra:
            raise InvalidConfig(f"unknown config keys {sorted(extra)}")
        problem, fmt = d.get("problem"), d.get("format")

        def resolve(p: str) -> str:
            if p.startswith("fixture:") or base is None or Path(p).is_absolute():
                return p
            return str(base / p)

        specs = []
        for item in d.get("instances", []):
            if isinstance(item, str):
                specs.append(InstanceSpec(resolve(item), problem, fmt))
            elif isinstance(item, dict) and "path" in item:
                specs.append(InstanceSpec(resolve(item["path"]), item.get("problem", problem),
                                          item.get("format", fmt)))
            else:
                raise InvalidConfig(f"bad instance entry {item!r}")
        out = d.get("out", "results")
        if base is not None and not Path(out).is_absolute():
            out = str(base / out)
        try:
            cfg = cls(
                instances=tuple(specs),
                algorithms=tuple(d.get("algorithms", ["vns"])),
                runs=int(d.get("runs", 5)),
                time_limit=float(d.get("time_limit", 5.0)),
                seed=int(d.get("seed", 0)),
                out=out,
                max_evaluations=d.get("max_evaluations"),
                max_iterations=d.get("max_iterations"),
                lower_bounds={str(k): float(v) for k, v in d.get("lower_bounds", {}).items()},
                stop_at_bound=bool(d.get("stop_at_bound", False)),
                workers=int(d.get("workers", 1)),
            )
        except (TypeError, ValueError) as e:
            raise InvalidConfig(str(e)) from None
        return cfg.validate()

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        p = Path(path)
        try:
            d = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise InvalidConfig(f"{p}:{e.lineno}: {e.msg}") from None
        if not isinstance(d, dict):
            raise InvalidConfig("config must be a JSON object")
        return cls.from_dict(d, p.parent)


@dataclass(frozen=True)
class RunResult:
    instance: str
    algorithm: str
    run: int
    seed: int
    objective: float | None
    feasible: bool
    violation_sum: float | None
    evaluations: int
    iterations: int
    elapsed: float
    trace: tuple[tuple[float, int, float, float], ...]  # elapsed_ms, evaluations, best, violation_sum
    error: str | None = None


@dataclass(frozen=True)
class ResultRow:
    instance: str
    algorithm: str
    runs: int
    feasible_runs: int
    best_objective: float | None
    mean_objective: float | None
    best_gap: float | None
    mean_gap: float | None
    lower_bound: float | None
    mean_evaluations: float
    seeds: tuple[int, ...]
    mean_wall_clock: float = field(default=0.0, compare=False)
    error: str | None = None

    def record(self) -> dict:
        """Deterministic fields only (wall-clock goes to the timing file)."""
        d = asdict(self)
        d.pop("mean_wall_clock")
        d["seeds"] = list(self.seeds)
        return d


def _run_cell(spec: InstanceSpec, algorithm: str, run: int, config: ExperimentConfig,
              bound: float | None) -> RunResult:
    seed = config.seed + run
    try:
        model = build_model(spec.load())
        variant, selection = ALGORITHMS[algorithm]
        target = bound if config.stop_at_bound else None
        rep = solve(model, SolverConfig(
            variant=variant, time_limit=config.time_limit, seed=seed,
            max_evaluations=config.max_evaluations, max_iterations=config.max_iterations,
            target=target, q=QParams(selection=selection),
        ))
    except (RestaskError, OSError) as e:
        return RunResult(spec.id, algorithm, run, seed, None, False, None, 0, 0, 0.0, (), f"{type(e).__name__}: {e}")
    trace = tuple((p.elapsed * 1000.0, p.evaluations, p.best_objective, p.violation_sum) for p in rep.trace)
    b = rep.best
    return RunResult(spec.id, algorithm, run, seed, b.objective, b.feasible, b.violation_sum,
                     rep.evaluations, rep.iterations, rep.elapsed, trace)


def _aggregate(spec_id: str, algorithm: str, runs: list[RunResult], bound: float | None,
               sense: Sense) -> ResultRow:
    seeds = tuple(r.seed for r in runs)
    errors = [r.error for r in runs if r.error]
    ok = [r for r in runs if r.error is None]
    if not ok:
        return ResultRow(spec_id, algorithm, len(runs), 0, None, None, None, None, bound, 0.0, seeds, 0.0,
                         errors[0])
    feas = [r for r in ok if r.feasible]
    pool = feas or ok
    objs = [r.objective for r in pool]
    best = min(objs) if sense is Sense.MIN else max(objs)
    mean = statistics.fmean(objs)
    best_gap = mean_gap = None
    if bound is not None and feas:
        best_gap = compute_gap(best, bound, sense)
        mean_gap = statistics.fmean(compute_gap(o, bound, sense) for o in objs)
    return ResultRow(
        spec_id, algorithm, len(runs), len(feas), best, mean, best_gap, mean_gap, bound,
        statistics.fmean(r.evaluations for r in ok), seeds, statistics.fmean(r.elapsed for r in ok),
        errors[0] if errors else None,
    )


def _cell(args):
    return _run_cell(*args)


def run_experiment(config: ExperimentConfig, write: bool = True) -> list[ResultRow]:
    config.validate()
    bounds: dict[str, float | None] = {}
    senses: dict[str, Sense] = {}
    cells = []
    for spec in config.instances:
        bound = config.lower_bounds.get(spec.id)
        sense = Sense.MIN
        try:
            inst = spec.load()
            sense = build_model(inst).sense
            if bound is None:
                bound = lower_bound(inst)
        except (RestaskError, OSError):
            pass  # the failure is reported per run
        bounds[spec.id], senses[spec.id] = bound, sense
        for algorithm in config.algorithms:
            for run in range(config.runs):
                cells.append((spec, algorithm, run, config, bound))

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_cell, cells))
    else:
        results = [_cell(c) for c in cells]

    grouped: dict[tuple[str, str], list[RunResult]] = {}
    for r in results:
        grouped.setdefault((r.instance, r.algorithm), []).append(r)
    rows = [
        _aggregate(spec.id, a, grouped[(spec.id, a)], bounds[spec.id], senses[spec.id])
        for spec in config.instances
        for a in config.algorithms
    ]
    if write:
        write_outputs(config, rows, results)
    return rows


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


RESULT_COLUMNS = ("instance", "algorithm", "runs", "feasible_runs", "best_objective", "mean_objective",
                  "best_gap", "mean_gap", "lower_bound", "mean_evaluations", "seeds", "error")
TRACE_COLUMNS = ("elapsed_ms", "evaluations", "best_objective", "violation_sum")


def results_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for row in rows:
        rec = row.record()
        rec["seeds"] = ";".join(map(str, row.seeds))
        w.writerow([_num(rec[c]) if c != "seeds" else rec[c] for c in RESULT_COLUMNS])
    return buf.getvalue()


def trace_csv(run: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for ms, ev, best, viol in run.trace:
        w.writerow([f"{ms:.3f}", ev, _num(best), _num(viol)])
    return buf.getvalue()


def write_outputs(config: ExperimentConfig, rows: list[ResultRow], runs: list[RunResult]) -> Path:
    out = Path(config.out)
    (out / "traces").mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(results_csv(rows))
    payload = {
        "config": {
            "instances": [s.id for s in config.instances], "algorithms": list(config.algorithms),
            "runs": config.runs, "time_limit": config.time_limit, "seed": config.seed,
            "max_evaluations": config.max_evaluations, "max_iterations": config.max_iterations,
            "stop_at_bound": config.stop_at_bound,
        },
        "rows": [r.record() for r in rows],
    }
    (out / "results.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    timing = ["instance,algorithm,mean_wall_clock_s"]
    timing += [f"{r.instance},{r.algorithm},{r.mean_wall_clock:.6f}" for r in rows]
    (out / "timing.csv").write_text("\n".join(timing) + "\n")
    for r in runs:
        (out / "traces" / f"{r.instance}__{r.algorithm}__run{r.run}.csv").write_text(trace_csv(r))
    return out
