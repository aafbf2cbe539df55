"""Edit classification and propagation of pseudocode edits to source code.

`diff_pseudo` compares the canonical renderings of two programs and returns
a minimal line-edit script grouped into additions, deletions and
replacements, each anchored by up to three lines of preceding context.
`build_revision_prompt` turns one edit into the fixed prompt block that
communicates it to the model; `propose_revision` sends all edits from one
save in a single call and wraps the reply in a pending diff preview that the
caller must confirm before anything touches disk.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidStateError
from .grammar import LineRange, PseudoProgram, render_text
from .linediff import DiffRun, apply_runs, line_diff, unified
from .llm import ChatRequest, LlmClient, strip_code_fences
from .pipeline import SourceDocument, fill, load_prompt

CONTEXT_LINES = 3


class EditKind(str, enum.Enum):
    ADDITION = "addition"
    DELETION = "deletion"
    REPLACEMENT = "replacement"


@dataclass(frozen=True)
class EditOp:
    """One classified pseudocode edit, in old-rendering coordinates.

    For additions, `range` is the insertion point: the new lines go in front
    of old line `range.start` (so "after line range.start - 1").
    """

    kind: EditKind
    range: LineRange
    context_before: tuple[str, ...]
    old_block: tuple[str, ...]
    new_block: tuple[str, ...]

    def __post_init__(self):
        if self.kind is EditKind.ADDITION and (self.old_block or not self.new_block):
            raise ValueError("an addition has no old block and a nonempty new block")
        if self.kind is EditKind.DELETION and (self.new_block or not self.old_block):
            raise ValueError("a deletion has no new block and a nonempty old block")
        if self.kind is EditKind.REPLACEMENT and not (self.old_block and self.new_block):
            raise ValueError("a replacement has both an old and a new block")
        if len(self.context_before) != min(CONTEXT_LINES, self.range.start - 1):
            raise ValueError("context_before must hold the lines directly above the range")

    def to_payload(self) -> dict:
        return {
            "kind": self.kind.value,
            "range": {"start": self.range.start, "end": self.range.end},
            "context_before": list(self.context_before),
            "old_block": list(self.old_block),
            "new_block": list(self.new_block),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "EditOp":
        return cls(
            kind=EditKind(payload["kind"]),
            range=LineRange(payload["range"]["start"], payload["range"]["end"]),
            context_before=tuple(payload["context_before"]),
            old_block=tuple(payload["old_block"]),
            new_block=tuple(payload["new_block"]),
        )


def _context_before(old_lines: Sequence[str], start: int) -> tuple[str, ...]:
    take = min(CONTEXT_LINES, start - 1)
    return tuple(old_lines[start - 1 - take:start - 1])


def ops_from_runs(old_lines: Sequence[str], runs: Sequence[DiffRun]) -> list[EditOp]:
    ops = []
    for run in runs:
        if run.old_lines and run.new_lines:
            kind = EditKind.REPLACEMENT
            rng = LineRange(run.old_start, run.old_end)
        elif run.old_lines:
            kind = EditKind.DELETION
            rng = LineRange(run.old_start, run.old_end)
        else:
            kind = EditKind.ADDITION
            rng = LineRange(run.old_start, run.old_start)
        ops.append(EditOp(kind=kind, range=rng,
                          context_before=_context_before(old_lines, rng.start),
                          old_block=run.old_lines, new_block=run.new_lines))
    return ops


def diff_pseudo(old: PseudoProgram, new: PseudoProgram) -> list[EditOp]:
    """Classified minimal line edits between two programs' canonical forms."""
    old_lines = render_text(old).split("\n")
    new_lines = render_text(new).split("\n")
    return ops_from_runs(old_lines, line_diff(old_lines, new_lines))


def apply_edit_ops(old_lines: Sequence[str], ops: Sequence[EditOp]) -> list[str]:
    """Replay edit ops over the old rendering's lines."""
    out: list[str] = []
    cursor = 0
    for op in sorted(ops, key=lambda o: o.range.start):
        keep_until = op.range.start - 1
        out.extend(old_lines[cursor:keep_until])
        out.extend(op.new_block)
        cursor = keep_until + len(op.old_block)
    out.extend(old_lines[cursor:])
    return out


def _fence(lines: Sequence[str]) -> str:
    return "```pseudocode\n" + "".join(line + "\n" for line in lines) + "```"


def build_revision_prompt(op: EditOp) -> str:
    """Render one edit as the fixed prompt block sent to the model."""
    parts: list[str] = []
    if op.context_before:
        parts.append("After the context \n")
        parts.append(_fence(op.context_before))
        lead = "\n "
    else:
        parts.append("At the beginning of the pseudocode,")
        lead = " "
    if op.kind is EditKind.REPLACEMENT:
        parts.append(f"{lead}the pseudocode in lines {op.range}:\n")
        parts.append(_fence(op.old_block))
        parts.append("\nis replaced with:\n")
        parts.append(_fence(op.new_block))
    elif op.kind is EditKind.ADDITION:
        if op.range.start == 1:
            parts.append(f"{lead}the following pseudocode is inserted:\n")
        else:
            parts.append(f"{lead}the following pseudocode is inserted"
                         f" after line {op.range.start - 1}:\n")
        parts.append(_fence(op.new_block))
    else:
        parts.append(f"{lead}the pseudocode in lines {op.range} is deleted:\n")
        parts.append(_fence(op.old_block))
    parts.append("\n")
    return "".join(parts)


# --- preview -----------------------------------------------------------------

PENDING = "pending"
CONFIRMED = "confirmed"
REJECTED = "rejected"


@dataclass
class DiffPreview:
    """A proposed source change held until a human confirms or rejects it."""

    old_source: SourceDocument
    new_source_text: str
    hunks: tuple[DiffRun, ...] = field(default=())
    status: str = PENDING

    def __post_init__(self):
        if not self.hunks and self.new_source_text != self.old_source.text:
            object.__setattr__(self, "hunks", tuple(
                line_diff(self.old_source.text.split("\n"),
                          self.new_source_text.split("\n"))))

    def reconstruct(self) -> str:
        return "\n".join(apply_runs(self.old_source.text.split("\n"), self.hunks))

    def unified_text(self) -> str:
        return unified(self.old_source.text.split("\n"), self.hunks,
                       fromfile=self.old_source.path, tofile=self.old_source.path)

    def mark(self, status: str) -> None:
        if self.status != PENDING:
            raise InvalidStateError(f"preview is already {self.status}")
        self.status = status

    def to_payload(self) -> dict:
        return {
            "old_source": {"path": self.old_source.path,
                           "language_hint": self.old_source.language_hint,
                           "text": self.old_source.text},
            "new_source_text": self.new_source_text,
            "hunks": [{"old_start": h.old_start, "old_lines": list(h.old_lines),
                       "new_start": h.new_start, "new_lines": list(h.new_lines)}
                      for h in self.hunks],
            "status": self.status,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "DiffPreview":
        src = payload["old_source"]
        return cls(
            old_source=SourceDocument.from_text(src["path"], src["text"],
                                                src["language_hint"]),
            new_source_text=payload["new_source_text"],
            hunks=tuple(DiffRun(h["old_start"], tuple(h["old_lines"]),
                                h["new_start"], tuple(h["new_lines"]))
                        for h in payload["hunks"]),
            status=payload["status"],
        )


def build_apply_request(source: SourceDocument, program: PseudoProgram,
                        ops: Sequence[EditOp]) -> ChatRequest:
    operations = "\n".join(build_revision_prompt(op) for op in ops)
    user = fill(load_prompt("revise_user"), language=source.language_hint,
                source=source.text.rstrip("\n"),
                pseudocode=render_text(program).rstrip("\n"),
                operations=operations.rstrip("\n"))
    return ChatRequest(system_text=load_prompt("revise_system"), user_text=user)


def propose_revision(source: SourceDocument, old_program: PseudoProgram,
                     ops: Sequence[EditOp], client: LlmClient) -> DiffPreview:
    """One model call for all edits from a save; returns a pending preview."""
    if not ops:
        raise InvalidStateError("there are no pseudocode edits to apply")
    response = client.complete(build_apply_request(source, old_program, ops))
    new_text = strip_code_fences(response.text)
    return DiffPreview(old_source=source, new_source_text=new_text)
