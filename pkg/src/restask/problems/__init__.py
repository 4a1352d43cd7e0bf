"""Adapters that express standard problems as resource-task models."""

from restask.model import ProblemModel
from restask.problems.bppc import BppcInstance, model_bppc, random_bppc
from restask.problems.gap import GapInstance, model_gap, random_gap
from restask.problems.gc import GcInstance, model_gc, random_gc
from restask.problems.jssp import JsspInstance, model_jssp, random_jssp
from restask.problems.vrptw import VrptwInstance, model_vrptw, random_vrptw
from restask.problems import bppc, gap, gc, jssp, vrptw

_MODULES = {"gap": gap, "bppc": bppc, "gc": gc, "jssp": jssp, "vrptw": vrptw}


def build_model(instance):
    """Model for any supported instance type; models pass through unchanged."""
    if isinstance(instance, ProblemModel):
        return instance
    for name, mod in _MODULES.items():
        if isinstance(instance, _INSTANCE_TYPES[name]):
            return getattr(mod, f"model_{name}")(instance)
    raise TypeError(f"unsupported instance type {type(instance).__name__}")


def lower_bound(instance) -> float | None:
    if isinstance(instance, ProblemModel):
        return None
    for name, mod in _MODULES.items():
        if isinstance(instance, _INSTANCE_TYPES[name]):
            return mod.lower_bound(instance)
    raise TypeError(f"unsupported instance type {type(instance).__name__}")


_INSTANCE_TYPES = {
    "gap": GapInstance, "bppc": BppcInstance, "gc": GcInstance, "jssp": JsspInstance, "vrptw": VrptwInstance,
}

__all__ = [
    "BppcInstance", "GapInstance", "GcInstance", "JsspInstance", "VrptwInstance",
    "build_model", "lower_bound",
    "model_bppc", "model_gap", "model_gc", "model_jssp", "model_vrptw",
    "random_bppc", "random_gap", "random_gc", "random_jssp", "random_vrptw",
]
