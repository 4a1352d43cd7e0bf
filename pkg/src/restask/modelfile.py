"""JSON model-description format.

A description lists resources and tasks with numeric attributes, the ordering
flag, template constraints with their coefficient tables and a builtin
objective.  Custom residuals and objectives are code-only, so models using
them cannot be written.

Coefficients are a number, ``{"by_task": [...]}`` or
``{"by_resource_task": [[...], ...]}``.  Example::

    {
      "format": "restask-model", "version": 1,
      "name": "tiny", "ordered": false,
      "resources": [{"attributes": {"capacity": 5}}],
      "tasks": [{}, {}],
      "objective": {"builtin": "assignment_cost", "sense": "min", "cost": 1},
      "constraints": [
        {"template": "task_aggregate", "coefficients": 1, "thresholds": 1, "relation": "="}
      ]
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from restask.errors import NotRepresentable, ParseError
from restask.model import (
    Pairing,
    Precedence,
    ProblemModel,
    Resource,
    ResourceAggregate,
    ResourceTaskAggregate,
    Task,
    TaskAggregate,
    assignment_cost,
    profit,
    used_resources,
)

FORMAT = "restask-model"
VERSION = 1

_number_or_null = {"type": ["number", "null"]}
_coefficients = {
    "oneOf": [
        {"type": "number"},
        {"type": "object", "required": ["by_task"], "additionalProperties": False,
         "properties": {"by_task": {"type": "array", "items": {"type": "number"}}}},
        {"type": "object", "required": ["by_resource_task"], "additionalProperties": False,
         "properties": {"by_resource_task": {"type": "array",
                                              "items": {"type": "array", "items": {"type": "number"}}}}},
    ]
}
_relation = {"enum": ["<=", ">=", "="]}
_pairs = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}}
_attributes = {"type": "object", "additionalProperties": {"type": "number"}}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "version", "ordered", "resources", "tasks", "objective"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": FORMAT},
        "version": {"const": VERSION},
        "name": {"type": "string"},
        "ordered": {"type": "boolean"},
        "interchangeable_resources": {"type": "boolean"},
        "resources": {"type": "array", "items": {
            "type": "object", "additionalProperties": False,
            "properties": {"attributes": _attributes,
                           "capacity": {"type": ["integer", "null"], "minimum": 1}},
        }},
        "tasks": {"type": "array", "items": {
            "type": "object", "additionalProperties": False, "properties": {"attributes": _attributes},
        }},
        "objective": {"oneOf": [
            {"type": "object", "required": ["builtin", "cost"], "additionalProperties": False,
             "properties": {"builtin": {"const": "assignment_cost"}, "sense": {"enum": ["min", "max"]},
                            "cost": _coefficients}},
            {"type": "object", "required": ["builtin", "gain"], "additionalProperties": False,
             "properties": {"builtin": {"const": "profit"}, "sense": {"const": "max"},
                            "gain": _coefficients, "cost": _coefficients}},
            {"type": "object", "required": ["builtin"], "additionalProperties": False,
             "properties": {"builtin": {"const": "used_resources"}, "sense": {"const": "min"}}},
        ]},
        "constraints": {"type": "array", "items": {"oneOf": [
            {"type": "object", "required": ["template", "coefficients", "thresholds"], "additionalProperties": False,
             "properties": {"template": {"const": "resource_aggregate"}, "name": {"type": "string"},
                            "coefficients": _coefficients, "relation": _relation,
                            "thresholds": {"type": "array", "items": _number_or_null}}},
            {"type": "object", "required": ["template", "coefficients", "thresholds"], "additionalProperties": False,
             "properties": {"template": {"const": "task_aggregate"}, "name": {"type": "string"},
                            "coefficients": _coefficients, "relation": _relation,
                            "thresholds": {"oneOf": [{"type": "number"},
                                                     {"type": "array", "items": _number_or_null}]}}},
            {"type": "object", "required": ["template", "pairs"], "additionalProperties": False,
             "properties": {"template": {"const": "pairing"}, "name": {"type": "string"}, "pairs": _pairs,
                            "mode": {"enum": ["same", "different"]}}},
            {"type": "object", "required": ["template", "pairs"], "additionalProperties": False,
             "properties": {"template": {"const": "precedence"}, "name": {"type": "string"}, "pairs": _pairs}},
            {"type": "object", "required": ["template", "coefficients", "thresholds"], "additionalProperties": False,
             "properties": {"template": {"const": "resource_task_aggregate"}, "name": {"type": "string"},
                            "coefficients": _coefficients, "relation": _relation,
                            "thresholds": {"type": "array",
                                           "items": {"type": "array", "items": _number_or_null}}}},
        ]}},
    },
}


def _coef_in(spec):
    if isinstance(spec, dict):
        return spec.get("by_task", spec.get("by_resource_task"))
    return spec


def _objective_in(d):
    kind = d["builtin"]
    if kind == "assignment_cost":
        return assignment_cost(_coef_in(d["cost"]), d.get("sense", "min"))
    if kind == "profit":
        return profit(_coef_in(d["gain"]), _coef_in(d.get("cost", 0.0)))
    return used_resources()


def _constraint_in(d):
    t, name = d["template"], d.get("name")
    kw = {"name": name} if name else {}
    if t == "resource_aggregate":
        return ResourceAggregate(_coef_in(d["coefficients"]), d["thresholds"], d.get("relation", "<="), **kw)
    if t == "task_aggregate":
        return TaskAggregate(_coef_in(d["coefficients"]), d["thresholds"], d.get("relation", "="), **kw)
    if t == "pairing":
        return Pairing([tuple(p) for p in d["pairs"]], d.get("mode", "different"), **kw)
    if t == "precedence":
        return Precedence([tuple(p) for p in d["pairs"]], **kw)
    return ResourceTaskAggregate(_coef_in(d["coefficients"]), d["thresholds"], d.get("relation", "<="), **kw)


def model_from_dict(d: dict) -> ProblemModel:
    """Build a model from a parsed description; raises ``jsonschema.ValidationError`` on bad shape."""
    jsonschema.validate(d, SCHEMA)
    return ProblemModel(
        resources=[Resource(i, r.get("attributes", {}), r.get("capacity"))
                   for i, r in enumerate(d["resources"], 1)],
        tasks=[Task(j, t.get("attributes", {})) for j, t in enumerate(d["tasks"], 1)],
        ordered=d["ordered"],
        objective=_objective_in(d["objective"]),
        constraints=[_constraint_in(c) for c in d.get("constraints", [])],
        name=d.get("name", ""),
        interchangeable_resources=d.get("interchangeable_resources", False),
    )


def model_to_dict(model: ProblemModel) -> dict:
    if model.attribute_evaluators:
        raise NotRepresentable("attribute evaluators are code-only")
    objective = model.objective.to_json()
    if objective is None:
        raise NotRepresentable(f"objective {model.objective.name!r} is code-only")
    constraints = []
    for c in model.constraints:
        j = c.to_json()
        if j is None:
            raise NotRepresentable(f"constraint {c.name!r} is code-only")
        constraints.append(j)

    def res(r):
        out: dict[str, Any] = {"attributes": dict(r.attributes)}
        if r.capacity is not None:
            out["capacity"] = r.capacity
        return out

    return {
        "format": FORMAT,
        "version": VERSION,
        "name": model.name,
        "ordered": model.ordered,
        "interchangeable_resources": model.interchangeable_resources,
        "resources": [res(r) for r in model.resources],
        "tasks": [{"attributes": dict(t.attributes)} for t in model.tasks],
        "objective": objective,
        "constraints": constraints,
    }


def loads_model(text: str, path: str | None = None) -> ProblemModel:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.msg, path) from None
    try:
        return model_from_dict(d)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ParseError(_line_of(text, e.absolute_path), f"{where}: {e.message}", path) from None


def _line_of(text: str, pointer) -> int:
    """Best-effort line of the first key on the failing path (1 when unknown)."""
    keys = [p for p in pointer if isinstance(p, str)]
    if not keys:
        return 1
    needle = f'"{keys[-1]}"'
    for n, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return n
    return 1


def dumps_model(model: ProblemModel) -> str:
    return json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n"


def load_model(path: str | Path) -> ProblemModel:
    p = Path(path)
    return loads_model(p.read_text(), str(p))


def save_model(model: ProblemModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))
