"""Job descriptions: the JSON input format of the command-line tool.

A job bundles a function description, a space description, the actions to
run and output settings.  Function branches are arithmetic expressions in x
handled by the built-in parser; constant branches keep exact antiderivatives
so the step-function jobs run entirely on closed-form integrals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ExpressionError, JobSpecError
from .expressions import constant_value, parse_expression
from .functions import Branch, HeavisideTypeFunction

_ACTIONS = ("canonical", "approximate", "verify", "sample")


@dataclass(frozen=True)
class JobSpec:
    """Parsed job: what to approximate, in which space, and what to emit."""

    function: HeavisideTypeFunction
    space_description: dict
    actions: tuple[str, ...]
    sample_resolution: int
    output: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def wants(self, action: str) -> bool:
        return action in self.actions


def _branch_from_expression(source: str) -> Branch:
    value = constant_value(source)
    if value is not None:
        return Branch.constant(value)
    return Branch.from_callable(parse_expression(source))


def function_from_description(desc: dict) -> HeavisideTypeFunction:
    """Build a jump function from {"domain": [a, b], "jump": d, "left": expr,
    "right": expr}."""
    if not isinstance(desc, dict):
        raise JobSpecError("function description must be a mapping")
    missing = [key for key in ("domain", "jump", "left", "right") if key not in desc]
    if missing:
        raise JobSpecError(f"function description missing {', '.join(missing)}")
    domain = desc["domain"]
    if not (isinstance(domain, (list, tuple)) and len(domain) == 2):
        raise JobSpecError("function domain must be a pair [a, b]")
    try:
        left = _branch_from_expression(str(desc["left"]))
        right = _branch_from_expression(str(desc["right"]))
    except ExpressionError as exc:
        raise JobSpecError(f"bad branch expression: {exc}") from None
    return HeavisideTypeFunction(
        left_branch=left,
        right_branch=right,
        jump_location=float(desc["jump"]),
        domain=(float(domain[0]), float(domain[1])),
    )


def parse_job(data: dict) -> JobSpec:
    """Validate and parse a job dictionary.

    A result file produced by the approximate command embeds its job under a
    "job" key; such files are accepted directly, so outputs can be re-fed to
    the verify command unchanged.
    """
    if not isinstance(data, dict):
        raise JobSpecError("job spec must be a JSON object")
    if "job" in data and isinstance(data["job"], dict):
        data = data["job"]

    for key in ("function", "space"):
        if key not in data:
            raise JobSpecError(f"job spec missing '{key}'")
    actions = data.get("actions")
    if not isinstance(actions, (list, tuple)) or not actions:
        raise JobSpecError("job spec needs a non-empty 'actions' list")
    bad = [a for a in actions if a not in _ACTIONS]
    if bad:
        raise JobSpecError(
            f"unknown actions {bad}; valid actions: {', '.join(_ACTIONS)}"
        )
    resolution = int(data.get("sample_resolution", 400))
    if resolution < 2:
        raise JobSpecError("sample_resolution must be at least 2")
    output = data.get("output", {})
    if not isinstance(output, dict):
        raise JobSpecError("'output' must be a mapping of kind to path")

    function = function_from_description(data["function"])
    space_desc = data["space"]
    if not isinstance(space_desc, dict):
        raise JobSpecError("space description must be a mapping")

    return JobSpec(
        function=function,
        space_description=dict(space_desc),
        actions=tuple(str(a) for a in actions),
        sample_resolution=resolution,
        output=dict(output),
        raw=dict(data),
    )


def load_job(path: str) -> JobSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise JobSpecError(f"cannot read job spec {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobSpecError(f"job spec {path} is not valid JSON: {exc}") from None
    return parse_job(data)
