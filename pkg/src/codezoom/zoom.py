"""Semantic zooming: expand a pseudocode region into finer detail or collapse
it into a coarser summary, with a cache that makes expand-then-collapse (and
the reverse) deterministic and free of model calls.

The cache is keyed by structural fingerprints of statement subtrees, never by
line numbers: line numbers shift with every zoom, structure does not. Each
entry pairs a coarse statement list with its fine-grained expansion and can
be looked up from either side. Entries created by an expand gesture keep the
exact selection as the coarse side, so collapsing the expanded region always
restores the original statements verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import LlmError, SummaryShapeError
from .grammar import (
    BlockSelection,
    LineRange,
    PseudoProgram,
    Simple,
    Statement,
    fingerprint,
    render,
    replaced_span,
    slice_range,
    splice,
    steps_from_interchange,
    steps_to_interchange,
)
from .llm import SCHEMA_SINGLE_STEP, SCHEMA_STEPS, ChatRequest, LlmClient
from .pipeline import SourceDocument, fill, grammar_system_prompt, load_prompt

REGION_OPEN = "<<<REGION"
REGION_CLOSE = "REGION>>>"

EXPAND = "expand"
COLLAPSE = "collapse"


@dataclass(frozen=True)
class ZoomResult:
    program: PseudoProgram
    changed_range: LineRange
    used_cache: bool


@dataclass(frozen=True)
class _CacheEntry:
    coarse: tuple[Statement, ...]
    fine: tuple[Statement, ...]


class ZoomCache:
    """Bidirectional memory of (coarse region, fine-grained expansion) pairs."""

    def __init__(self):
        self._by_coarse: dict[str, _CacheEntry] = {}
        self._by_fine: dict[str, _CacheEntry] = {}

    def __len__(self) -> int:
        return len(self._by_coarse)

    def add(self, coarse: Sequence[Statement], fine: Sequence[Statement]) -> None:
        entry = _CacheEntry(tuple(coarse), tuple(fine))
        self._by_coarse[fingerprint(entry.coarse)] = entry
        self._by_fine[fingerprint(entry.fine)] = entry

    def expansion_of(self, coarse: Sequence[Statement]) -> Optional[tuple[Statement, ...]]:
        entry = self._by_coarse.get(fingerprint(tuple(coarse)))
        return entry.fine if entry else None

    def summary_of(self, fine: Sequence[Statement]) -> Optional[tuple[Statement, ...]]:
        entry = self._by_fine.get(fingerprint(tuple(fine)))
        return entry.coarse if entry else None

    def to_payload(self) -> list[dict]:
        seen = []
        for entry in self._by_coarse.values():
            seen.append({"coarse": steps_to_interchange(entry.coarse),
                         "fine": steps_to_interchange(entry.fine)})
        return seen

    @classmethod
    def from_payload(cls, payload: Sequence[dict]) -> "ZoomCache":
        cache = cls()
        for item in payload:
            cache.add(steps_from_interchange(item["coarse"], "coarse"),
                      steps_from_interchange(item["fine"], "fine"))
        return cache


def _marked_rendering(program: PseudoProgram, selection: BlockSelection) -> str:
    text, _ = render(program)
    lines = text.split("\n")[:-1]
    start, end = selection.line_range.start, selection.line_range.end
    marked = lines[:start - 1] + [REGION_OPEN] + lines[start - 1:end] \
        + [REGION_CLOSE] + lines[end:]
    return "\n".join(marked)


def build_zoom_request(operation: str, source: SourceDocument,
                       program: PseudoProgram, selection: BlockSelection) -> ChatRequest:
    schema = SCHEMA_SINGLE_STEP if operation == COLLAPSE else SCHEMA_STEPS
    user = fill(load_prompt("zoom_user"),
                operation=f"{operation} the marked region",
                language=source.language_hint,
                source=source.text.rstrip("\n"),
                marked_pseudocode=_marked_rendering(program, selection),
                operation_instruction=load_prompt(f"zoom_{operation}").rstrip("\n"))
    return ChatRequest(system_text=grammar_system_prompt("zoom_system"),
                       user_text=user, response_schema=schema)


def _finish(program: PseudoProgram, selection: BlockSelection,
            replacement: Sequence[Statement], used_cache: bool) -> ZoomResult:
    new_program = splice(program, selection, replacement)
    changed = replaced_span(new_program, selection.parent_path,
                            selection.flat_start, len(replacement))
    return ZoomResult(program=new_program, changed_range=changed, used_cache=used_cache)


def expand(program: PseudoProgram, source: SourceDocument, line_range: LineRange,
           cache: ZoomCache, client: LlmClient) -> ZoomResult:
    """Replace the selected statements with a finer-grained step list."""
    _, line_map = render(program)
    selection = slice_range(program, line_map, line_range)
    cached = cache.expansion_of(selection.statements)
    if cached is not None:
        return _finish(program, selection, cached, used_cache=True)
    response = client.complete(build_zoom_request(EXPAND, source, program, selection))
    replacement = steps_from_interchange(response.structured, "steps")
    cache.add(selection.statements, replacement)
    return _finish(program, selection, replacement, used_cache=False)


def collapse(program: PseudoProgram, source: SourceDocument, line_range: LineRange,
             cache: ZoomCache, client: LlmClient) -> ZoomResult:
    """Replace the selected statements with a coarser summary.

    A region that matches a cached expansion is restored from the cache with
    no model call; a single simple statement is already as coarse as it gets
    and collapses to itself.
    """
    _, line_map = render(program)
    selection = slice_range(program, line_map, line_range)
    cached = cache.summary_of(selection.statements)
    if cached is not None:
        return _finish(program, selection, cached, used_cache=True)
    if len(selection.statements) == 1 and isinstance(selection.statements[0], Simple):
        return _finish(program, selection, selection.statements, used_cache=False)
    try:
        response = client.complete(build_zoom_request(COLLAPSE, source, program, selection))
    except LlmError as exc:
        if exc.kind == "schema-after-retries" and exc.violation is not None \
                and exc.violation.constraint == "single-statement":
            raise SummaryShapeError(
                f"model kept returning more than one statement ({exc.attempts} attempts)")
        raise
    replacement = steps_from_interchange(response.structured, "steps")
    cache.add(replacement, selection.statements)
    return _finish(program, selection, replacement, used_cache=False)
