"""Shipped benchmark fixtures.

The ``T-*`` instances are tiny enough for exhaustive search; their optima
were computed by the brute-force oracle and cross-checked by independent
enumerators in the test suite.  The ``M-*`` instances are seeded random
instances of desk-scale size used for algorithm comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from restask.formats import parse_instance


@dataclass(frozen=True)
class Fixture:
    name: str
    problem: str  # gap | bppc | gc | jssp | vrptw
    fmt: str
    filename: str
    optimum: float | None = None  # known optimum (MIN sense)

    @property
    def path(self) -> Path:
        return Path(str(resources.files(__name__).joinpath(self.filename)))

    def load(self):
        return parse_instance(self.path, self.fmt)

    def model(self):
        from restask.problems import build_model

        return build_model(self.load())


TINY = (
    Fixture("T-GAP-1", "gap", "gap", "t-gap-1.txt", 19.0),
    Fixture("T-BPPC-1", "bppc", "bppc", "t-bppc-1.txt", 3.0),
    Fixture("T-GC-1", "gc", "dimacs", "t-gc-1.col", 3.0),
    Fixture("T-JSSP-1", "jssp", "taillard", "t-jssp-1.txt", 7.0),
    Fixture("T-VRPTW-1", "vrptw", "solomon", "t-vrptw-1.txt", 44.14213562373095),
)

MEDIUM = (
    Fixture("M-GAP-1", "gap", "gap", "m-gap-1.txt"),
    Fixture("M-BPPC-1", "bppc", "bppc", "m-bppc-1.txt"),
    Fixture("M-GC-1", "gc", "dimacs", "m-gc-1.col"),
    Fixture("M-JSSP-1", "jssp", "taillard", "m-jssp-1.txt"),
    Fixture("M-VRPTW-1", "vrptw", "solomon", "m-vrptw-1.txt"),
)

SUITE = TINY + MEDIUM
BY_NAME = {f.name: f for f in SUITE}


def load_fixture(name: str):
    return BY_NAME[name].load()
