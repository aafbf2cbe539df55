"""AST for the pseudocode language.

A document is a one-sentence goal followed by a nonempty sequence of steps.
Each step is a natural-language sentence or one of three control structures
(if/elif/else, while, for) whose bodies are again nonempty step sequences.

All nodes are frozen dataclasses: a program is an immutable value that can be
hashed, compared structurally, and shared across threads without locking.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

# Characters a description may never contain: the structural delimiters of
# the grammar plus line breaks.
FORBIDDEN_CHARS = ";{}()\n\r"


def check_description_text(text: str) -> Optional[str]:
    """Return an error message if `text` is not a valid description, else None."""
    if not isinstance(text, str):
        return "description must be a string"
    if not text.strip():
        return "description must be nonempty"
    for ch in FORBIDDEN_CHARS:
        if ch in text:
            shown = {"\n": "\\n", "\r": "\\r"}.get(ch, ch)
            return f"description must not contain {shown!r}"
    return None


@dataclass(frozen=True)
class Description:
    """A free-text sentence. Leading/trailing whitespace is normalized away."""

    text: str

    def __post_init__(self):
        stripped = self.text.strip() if isinstance(self.text, str) else self.text
        problem = check_description_text(stripped if isinstance(stripped, str) else "")
        if problem:
            raise ValueError(problem)
        object.__setattr__(self, "text", stripped)


@dataclass(frozen=True)
class Cond:
    """Condition of a control structure; renders as `description;` inside parens."""

    description: Description


@dataclass(frozen=True)
class Simple:
    description: Description


@dataclass(frozen=True)
class While:
    cond: Cond
    body: tuple["Statement", ...]

    def __post_init__(self):
        object.__setattr__(self, "body", _statement_block(self.body, "while body"))


@dataclass(frozen=True)
class If:
    cond: Cond
    then: tuple["Statement", ...]
    elifs: tuple[tuple[Cond, tuple["Statement", ...]], ...] = ()
    else_: Optional[tuple["Statement", ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "then", _statement_block(self.then, "then block"))
        arms = []
        for cond, body in self.elifs:
            arms.append((cond, _statement_block(body, "elif body")))
        object.__setattr__(self, "elifs", tuple(arms))
        if self.else_ is not None:
            object.__setattr__(self, "else_", _statement_block(self.else_, "else block"))


@dataclass(frozen=True)
class For:
    cond: Cond
    body: tuple["Statement", ...]

    def __post_init__(self):
        object.__setattr__(self, "body", _statement_block(self.body, "for body"))


Statement = Union[Simple, While, If, For]


@dataclass(frozen=True)
class PseudoProgram:
    goal: Description
    steps: tuple[Statement, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", _statement_block(self.steps, "steps"))


def _statement_block(stmts, what: str) -> tuple[Statement, ...]:
    block = tuple(stmts)
    if not block:
        raise ValueError(f"{what} must contain at least one statement")
    for s in block:
        if not isinstance(s, (Simple, While, If, For)):
            raise ValueError(f"{what} contains a non-statement value: {s!r}")
    return block


# --- navigation helpers -------------------------------------------------

def child_blocks(stmt: Statement) -> list[tuple[object, tuple[Statement, ...]]]:
    """Ordered (key, block) pairs of a statement's nested blocks.

    Keys are "body" for while/for, and "then", ("elif", i), "else" for if.
    """
    if isinstance(stmt, (While, For)):
        return [("body", stmt.body)]
    if isinstance(stmt, If):
        blocks: list[tuple[object, tuple[Statement, ...]]] = [("then", stmt.then)]
        for i, (_, body) in enumerate(stmt.elifs):
            blocks.append((("elif", i), body))
        if stmt.else_ is not None:
            blocks.append(("else", stmt.else_))
        return blocks
    return []


def flat_children(stmt: Statement) -> tuple[Statement, ...]:
    """All nested statements of `stmt` in rendering order, across blocks."""
    out: list[Statement] = []
    for _, block in child_blocks(stmt):
        out.extend(block)
    return tuple(out)


def decode_flat_index(stmt: Statement, flat: int) -> tuple[object, int]:
    """Map a flat child index to (block key, index within that block)."""
    remaining = flat
    for key, block in child_blocks(stmt):
        if remaining < len(block):
            return key, remaining
        remaining -= len(block)
    raise IndexError(f"flat child index {flat} out of range for {type(stmt).__name__}")


def get_block(stmt: Statement, key: object) -> tuple[Statement, ...]:
    for k, block in child_blocks(stmt):
        if k == key:
            return block
    raise KeyError(f"{type(stmt).__name__} has no block {key!r}")


def with_block(stmt: Statement, key: object, new_block: Sequence[Statement]) -> Statement:
    """Copy of `stmt` with the block named `key` replaced."""
    block = tuple(new_block)
    if isinstance(stmt, While) and key == "body":
        return While(stmt.cond, block)
    if isinstance(stmt, For) and key == "body":
        return For(stmt.cond, block)
    if isinstance(stmt, If):
        if key == "then":
            return If(stmt.cond, block, stmt.elifs, stmt.else_)
        if key == "else":
            return If(stmt.cond, stmt.then, stmt.elifs, block)
        if isinstance(key, tuple) and key[0] == "elif":
            arms = list(stmt.elifs)
            cond, _ = arms[key[1]]
            arms[key[1]] = (cond, block)
            return If(stmt.cond, stmt.then, tuple(arms), stmt.else_)
    raise KeyError(f"{type(stmt).__name__} has no block {key!r}")


def iter_statements(program: PseudoProgram) -> Iterator[Statement]:
    """Depth-first walk over every statement in the program."""
    stack = list(reversed(program.steps))
    while stack:
        stmt = stack.pop()
        yield stmt
        stack.extend(reversed(flat_children(stmt)))


def statement_count(program: PseudoProgram) -> int:
    return sum(1 for _ in iter_statements(program))


# --- structural fingerprints --------------------------------------------

def _shape(stmt: Statement):
    if isinstance(stmt, Simple):
        return ("s", stmt.description.text)
    if isinstance(stmt, While):
        return ("w", stmt.cond.description.text, tuple(_shape(c) for c in stmt.body))
    if isinstance(stmt, For):
        return ("f", stmt.cond.description.text, tuple(_shape(c) for c in stmt.body))
    if isinstance(stmt, If):
        return (
            "i",
            stmt.cond.description.text,
            tuple(_shape(c) for c in stmt.then),
            tuple((c.description.text, tuple(_shape(s) for s in body)) for c, body in stmt.elifs),
            None if stmt.else_ is None else tuple(_shape(c) for c in stmt.else_),
        )
    raise TypeError(f"not a statement: {stmt!r}")


def fingerprint(statements: Sequence[Statement]) -> str:
    """Stable digest of a statement list's structure and wording."""
    shape = tuple(_shape(s) for s in statements)
    return hashlib.sha256(repr(shape).encode("utf-8")).hexdigest()


def program_fingerprint(program: PseudoProgram) -> str:
    return hashlib.sha256(
        (repr(program.goal.text) + repr(tuple(_shape(s) for s in program.steps))).encode("utf-8")
    ).hexdigest()


def lint(program: PseudoProgram) -> list[str]:
    """Non-fatal style warnings. Currently: the goal should be one sentence."""
    warnings = []
    terminal_dots = 0
    text = program.goal.text
    for i, ch in enumerate(text):
        if ch == "." and (i + 1 == len(text) or text[i + 1].isspace()):
            terminal_dots += 1
    if terminal_dots > 1:
        warnings.append("goal looks like more than one sentence; keep it to a single summary")
    return warnings
