import csv
import io
import json

import pytest

from restask.bench import (
    ALGORITHMS,
    ExperimentConfig,
    InstanceSpec,
    TRACE_COLUMNS,
    compute_gap,
    run_experiment,
)
from restask.errors import InvalidConfig
from restask.model import Sense


def test_gap_formula():
    assert compute_gap(100, 100) == 0
    assert compute_gap(110, 100) == pytest.approx(0.10)
    assert compute_gap(5, 0) == 5.0
    assert compute_gap(90, 100, Sense.MAX) == pytest.approx(0.10)


def test_algorithm_table():
    assert ALGORITHMS["qvns"] == ("vns", "q")
    assert ALGORITHMS["avns"] == ("vns", "adaptive")
    assert ALGORITHMS["rvns"] == ("vns", "random")
    assert {"sa", "ts", "vns", "lns", "ga"} <= set(ALGORITHMS)


def cfg(tmp_path, **kw):
    base = dict(instances=(InstanceSpec("fixture:T-GAP-1"),), algorithms=("sa",), runs=1,
                max_evaluations=300, time_limit=60, out=str(tmp_path / "out"))
    base.update(kw)
    return ExperimentConfig(**base).validate()


def test_one_run_gives_one_row_and_one_trace(tmp_path):
    rows = run_experiment(cfg(tmp_path))
    assert len(rows) == 1
    traces = list((tmp_path / "out" / "traces").iterdir())
    assert len(traces) == 1
    header = traces[0].read_text().splitlines()[0]
    assert tuple(header.split(",")) == TRACE_COLUMNS


def test_rows_are_consistent(tmp_path):
    c = cfg(tmp_path, runs=3, algorithms=("sa", "lns"), seed=40)
    rows = run_experiment(c)
    for r in rows:
        assert r.seeds == (40, 41, 42)
        if r.feasible_runs == r.runs:
            assert r.best_objective <= r.mean_objective
            assert r.best_gap <= r.mean_gap
    table = list(csv.DictReader(io.StringIO((tmp_path / "out" / "results.csv").read_text())))
    assert [t["algorithm"] for t in table] == ["sa", "lns"]
    assert table[0]["seeds"] == "40;41;42"


def test_best_is_min_over_final_incumbents(tmp_path):
    rows = run_experiment(cfg(tmp_path, runs=3, instances=(InstanceSpec("fixture:M-GC-1"),)))
    finals = []
    for p in sorted((tmp_path / "out" / "traces").iterdir()):
        last = list(csv.DictReader(io.StringIO(p.read_text())))[-1]
        if float(last["violation_sum"]) == 0:
            finals.append(float(last["best_objective"]))
    assert rows[0].best_objective == min(finals)


def test_traces_are_time_ordered(tmp_path):
    run_experiment(cfg(tmp_path, runs=2))
    for p in (tmp_path / "out" / "traces").iterdir():
        ms = [float(r["elapsed_ms"]) for r in csv.DictReader(io.StringIO(p.read_text()))]
        assert ms == sorted(ms)


def test_outputs_are_byte_identical(tmp_path):
    a = cfg(tmp_path, runs=2, algorithms=("sa", "ga"), out=str(tmp_path / "a"))
    b = cfg(tmp_path, runs=2, algorithms=("sa", "ga"), out=str(tmp_path / "b"))
    run_experiment(a)
    run_experiment(b)
    for name in ("results.csv", "results.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_bad_instance_becomes_an_error_row(tmp_path):
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 2 1\ne 1 7\n")
    rows = run_experiment(cfg(tmp_path, instances=(InstanceSpec(str(bad), "gc"), InstanceSpec("fixture:T-GAP-1"))))
    assert rows[0].error and "7" in rows[0].error
    assert rows[1].error is None


@pytest.mark.parametrize("bad", [
    {"instances": []},
    {"instances": ["fixture:T-GAP-1"], "runs": 0},
    {"instances": ["fixture:T-GAP-1"], "time_limit": 0},
    {"instances": ["fixture:T-GAP-1"], "algorithms": ["hc"]},
    {"instances": ["fixture:T-GAP-1"], "colour": "blue"},
    {"instances": ["fixture:T-GAP-1", "fixture:T-GAP-1"]},
])
def test_config_validation(bad):
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_dict(bad)


def test_config_paths_resolve_relative_to_file(tmp_path):
    (tmp_path / "g.col").write_text("p edge 2 1\ne 1 2\n")
    p = tmp_path / "exp.json"
    p.write_text(json.dumps({"problem": "gc", "instances": ["g.col"], "out": "res"}))
    c = ExperimentConfig.load(p)
    assert c.instances[0].path == str(tmp_path / "g.col")
    assert c.out == str(tmp_path / "res")
    assert c.instances[0].load().n_nodes == 2
