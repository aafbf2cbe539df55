"""Structured interchange form of pseudocode programs.

The same document shape serves three purposes: on-disk program files,
request/response bodies of the local service, and the constrained output we
ask models for. Shape:

    {"goal": str, "steps": [Node, ...]}

    Node = {"kind": "simple", "text": str}
         | {"kind": "if", "cond": str, "then": [Node+],
            "elifs": [{"cond": str, "body": [Node+]}, ...], "else": [Node+]?}
         | {"kind": "while", "cond": str, "body": [Node+]}
         | {"kind": "for", "cond": str, "body": [Node+]}

Validation reports the first violated constraint together with the document
path of the offending value, which is what gets echoed back to a model when
a structured reply needs a retry.
"""

from __future__ import annotations

from typing import Any

from ..errors import SchemaError
from .nodes import (
    Cond,
    Description,
    For,
    If,
    PseudoProgram,
    Simple,
    Statement,
    While,
    check_description_text,
)

_NODE_KEYS = {
    "simple": {"kind", "text"},
    "if": {"kind", "cond", "then", "elifs", "else"},
    "while": {"kind", "cond", "body"},
    "for": {"kind", "cond", "body"},
}


def to_interchange(program: PseudoProgram) -> dict:
    """Convert a program to its interchange document."""
    return {"goal": program.goal.text, "steps": steps_to_interchange(program.steps)}


def steps_to_interchange(statements) -> list[dict]:
    return [_node_to(s) for s in statements]


def _node_to(stmt: Statement) -> dict:
    if isinstance(stmt, Simple):
        return {"kind": "simple", "text": stmt.description.text}
    if isinstance(stmt, While):
        return {"kind": "while", "cond": stmt.cond.description.text,
                "body": steps_to_interchange(stmt.body)}
    if isinstance(stmt, For):
        return {"kind": "for", "cond": stmt.cond.description.text,
                "body": steps_to_interchange(stmt.body)}
    if isinstance(stmt, If):
        node: dict = {"kind": "if", "cond": stmt.cond.description.text,
                      "then": steps_to_interchange(stmt.then)}
        if stmt.elifs:
            node["elifs"] = [{"cond": c.description.text, "body": steps_to_interchange(b)}
                             for c, b in stmt.elifs]
        if stmt.else_ is not None:
            node["else"] = steps_to_interchange(stmt.else_)
        return node
    raise TypeError(f"not a statement: {stmt!r}")


def from_interchange(document: Any) -> PseudoProgram:
    """Validate an interchange document and build the program it describes."""
    if not isinstance(document, dict):
        raise SchemaError("document must be an object", "", "object")
    unknown = set(document) - {"goal", "steps"}
    if unknown:
        raise SchemaError(f"unknown key {sorted(unknown)[0]!r}", "", "known-keys")
    if "goal" not in document:
        raise SchemaError("missing required key 'goal'", "goal", "required")
    goal = _description(document["goal"], "goal")
    if "steps" not in document:
        raise SchemaError("missing required key 'steps'", "steps", "required")
    steps = steps_from_interchange(document["steps"], "steps")
    return PseudoProgram(goal, steps)


def steps_from_interchange(value: Any, path: str = "steps") -> tuple[Statement, ...]:
    """Validate and build a nonempty statement list from interchange nodes."""
    if not isinstance(value, list):
        raise SchemaError("must be an array of statement nodes", path, "(Statement)+")
    if not value:
        raise SchemaError("must contain at least one statement", path, "(Statement)+")
    return tuple(_node_from(node, f"{path}[{i}]") for i, node in enumerate(value))


def _node_from(node: Any, path: str) -> Statement:
    if not isinstance(node, dict):
        raise SchemaError("statement node must be an object", path, "object")
    kind = node.get("kind")
    if kind not in _NODE_KEYS:
        raise SchemaError(
            f"unknown statement kind {kind!r}", f"{path}.kind", "kind")
    unknown = set(node) - _NODE_KEYS[kind]
    if unknown:
        raise SchemaError(f"unknown key {sorted(unknown)[0]!r}", path, "known-keys")

    if kind == "simple":
        if "text" not in node:
            raise SchemaError("missing required key 'text'", f"{path}.text", "required")
        return Simple(_description(node["text"], f"{path}.text"))

    if "cond" not in node:
        raise SchemaError("missing required key 'cond'", f"{path}.cond", "required")
    cond = Cond(_description(node["cond"], f"{path}.cond"))

    if kind in ("while", "for"):
        if "body" not in node:
            raise SchemaError("missing required key 'body'", f"{path}.body", "required")
        body = steps_from_interchange(node["body"], f"{path}.body")
        return While(cond, body) if kind == "while" else For(cond, body)

    if "then" not in node:
        raise SchemaError("missing required key 'then'", f"{path}.then", "required")
    then = steps_from_interchange(node["then"], f"{path}.then")
    elifs = []
    raw_elifs = node.get("elifs")
    if raw_elifs is not None:
        if not isinstance(raw_elifs, list):
            raise SchemaError("must be an array of elif arms", f"{path}.elifs", "array")
        for i, arm in enumerate(raw_elifs):
            arm_path = f"{path}.elifs[{i}]"
            if not isinstance(arm, dict):
                raise SchemaError("elif arm must be an object", arm_path, "object")
            unknown = set(arm) - {"cond", "body"}
            if unknown:
                raise SchemaError(f"unknown key {sorted(unknown)[0]!r}", arm_path, "known-keys")
            if "cond" not in arm:
                raise SchemaError("missing required key 'cond'", f"{arm_path}.cond", "required")
            if "body" not in arm:
                raise SchemaError("missing required key 'body'", f"{arm_path}.body", "required")
            elifs.append((Cond(_description(arm["cond"], f"{arm_path}.cond")),
                          steps_from_interchange(arm["body"], f"{arm_path}.body")))
    else_ = None
    raw_else = node.get("else")
    if raw_else is not None:
        else_ = steps_from_interchange(raw_else, f"{path}.else")
    return If(cond, then, tuple(elifs), else_)


def _description(value: Any, path: str) -> Description:
    if not isinstance(value, str):
        raise SchemaError("must be a string", path, "description")
    problem = check_description_text(value.strip())
    if problem:
        raise SchemaError(problem, path, "description")
    return Description(value)
