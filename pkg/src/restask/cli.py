"""Command-line entry point: ``restask solve | oracle | bench``.

Exit codes: 0 success, 1 other failure, 2 malformed instance input,
3 invalid configuration or arguments, 4 oracle refused (too large).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from restask.bench import ALGORITHMS, ExperimentConfig, InstanceSpec, results_csv, run_experiment
from restask.errors import InvalidConfig, ParseError, RestaskError, TooLarge, UnsupportedFormat
from restask.formats import PROBLEM_FORMATS, parse_instance
from restask.oracle import brute_force_oracle
from restask.problems import build_model

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CONFIG, EXIT_TOO_LARGE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidConfig(message)


def _problem_for(path: str, problem: str | None, fmt: str | None) -> tuple[str | None, str]:
    if fmt:
        return problem, fmt
    if problem:
        if problem not in PROBLEM_FORMATS:
            raise InvalidConfig(f"unknown problem kind {problem!r}; expected one of {sorted(PROBLEM_FORMATS)}")
        return problem, PROBLEM_FORMATS[problem]
    suffix = Path(path).suffix.lower()
    if suffix == ".col":
        return "gc", "dimacs"
    if suffix == ".json":
        return "model", "json"
    raise InvalidConfig(f"{path}: cannot infer the problem kind, pass --problem")


def _cmd_solve(args) -> int:
    problem, fmt = _problem_for(args.instance, args.problem, args.format)
    cfg = ExperimentConfig(
        instances=(InstanceSpec(args.instance, problem, fmt),),
        algorithms=(args.algo,),
        runs=args.runs,
        time_limit=args.time_limit,
        seed=args.seed,
        out=args.out,
        max_evaluations=args.max_evaluations,
        workers=args.workers,
    ).validate()
    # surface input errors directly instead of as failed rows
    InstanceSpec(args.instance, problem, fmt).load()
    rows = run_experiment(cfg)
    sys.stdout.write(results_csv(rows))
    return EXIT_FAIL if any(r.error for r in rows) else EXIT_OK


def _cmd_oracle(args) -> int:
    _, fmt = _problem_for(args.instance, args.problem, args.format)
    model = build_model(parse_instance(args.instance, fmt))
    res = brute_force_oracle(model, args.limit)
    print(json.dumps({
        "objective": res.objective,
        "feasible": res.feasible,
        "violation_sum": res.best.violation_sum,
        "structure": [list(s) for s in res.structure.assignments],
        "enumerated": res.count,
    }, indent=2))
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.out:
        cfg = ExperimentConfig(**{**cfg.__dict__, "out": args.out}).validate()
    rows = run_experiment(cfg)
    sys.stdout.write(results_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="restask", description="Resource-task metaheuristics")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve one instance several times")
    s.add_argument("--problem", choices=sorted(PROBLEM_FORMATS))
    s.add_argument("--format", help="instance format; defaults to the problem's usual format")
    s.add_argument("--instance", required=True)
    s.add_argument("--algo", default="vns", choices=sorted(ALGORITHMS))
    s.add_argument("--time-limit", type=float, default=5.0)
    s.add_argument("--runs", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-evaluations", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="results")
    s.set_defaults(func=_cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive optimum of a tiny instance")
    o.add_argument("--problem", choices=sorted(PROBLEM_FORMATS))
    o.add_argument("--format")
    o.add_argument("--instance", required=True)
    o.add_argument("--limit", type=int, default=1_000_000, help="largest enumeration allowed")
    o.set_defaults(func=_cmd_oracle)

    b = sub.add_parser("bench", help="run an experiment described by a JSON config")
    b.add_argument("--config", required=True)
    b.add_argument("--out", help="override the configured output directory")
    b.set_defaults(func=_cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidConfig, UnsupportedFormat) as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except TooLarge as e:
        print(f"too large: {e}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (RestaskError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
