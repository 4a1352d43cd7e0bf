"""Unified resource-task modeling with constraint-first metaheuristics."""

from restask.errors import (
    InvalidConfig,
    InvalidInstance,
    NoFeasibleResource,
    ParseError,
    RestaskError,
    TooLarge,
)
from restask.model import (
    EvaluatedSolution,
    ProblemModel,
    Relation,
    Resource,
    Sense,
    SolutionStructure,
    Task,
    evaluate,
)
from restask.ranking import compare, dominates, rank_solutions
from restask.solvers import RunReport, SolverConfig, solve

__version__ = "0.1.0"

__all__ = [
    "EvaluatedSolution", "InvalidConfig", "InvalidInstance", "NoFeasibleResource", "ParseError",
    "ProblemModel", "Relation", "Resource", "RestaskError", "RunReport", "Sense", "SolutionStructure",
    "SolverConfig", "Task", "TooLarge", "compare", "dominates", "evaluate", "rank_solutions", "solve",
]
