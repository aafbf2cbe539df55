"""Canonical rendering, line mapping, and range selection.

Every line number used anywhere in the system (zoom gestures, edit
classification, revision prompts) is defined against the canonical rendering
produced here: the goal header on line 1, ``STEPS:`` on line 2, one simple
statement per line, block headers opening their brace on the same line, and
closing braces alone on their own line. Each `elif`/`else` arm opens on a
fresh line after the previous arm's ``}``.

The LineMap ties each rendered line to the statement that owns it through a
path of child indices (if-statements flatten their arms into one child
sequence). `slice_range` turns a raw line range into whole statements,
widening selections that cut a block open/close pair to the enclosing
statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import RangeError
from .nodes import (
    Cond,
    For,
    If,
    PseudoProgram,
    Simple,
    Statement,
    While,
    decode_flat_index,
    get_block,
    with_block,
)

GOAL_HEADER = "goal-header"
STEPS_HEADER = "steps-header"
SIMPLE = "simple"
BLOCK_OPEN = "block-open"
ELIF_OPEN = "elif-open"
ELSE_OPEN = "else-open"
BLOCK_CLOSE = "block-close"

_HEADER_KINDS = (GOAL_HEADER, STEPS_HEADER)


@dataclass(frozen=True)
class LineRange:
    start: int
    end: int

    def __post_init__(self):
        if not (1 <= self.start <= self.end):
            raise RangeError(f"invalid line range {self.start}-{self.end}")

    def __str__(self) -> str:
        return str(self.start) if self.start == self.end else f"{self.start}-{self.end}"


@dataclass(frozen=True)
class RenderOptions:
    indent_width: int = 2
    with_line_numbers: bool = False


@dataclass(frozen=True)
class LineMapEntry:
    line: int
    path: tuple[int, ...]
    kind: str


@dataclass(frozen=True)
class LineMap:
    entries: tuple[LineMapEntry, ...]

    @property
    def line_count(self) -> int:
        return len(self.entries)

    def entry(self, line: int) -> LineMapEntry:
        if not (1 <= line <= len(self.entries)):
            raise RangeError(f"line {line} is outside the document (1-{len(self.entries)})")
        return self.entries[line - 1]

    def span_of(self, path: tuple[int, ...]) -> LineRange:
        """First..last rendered line belonging to `path` or its descendants."""
        lines = [e.line for e in self.entries
                 if e.path[:len(path)] == path and not _is_header(e)]
        if not lines:
            raise KeyError(f"no rendered lines for path {path!r}")
        return LineRange(min(lines), max(lines))


def _is_header(entry: LineMapEntry) -> bool:
    return entry.kind in _HEADER_KINDS


class _Renderer:
    def __init__(self, options: RenderOptions):
        self._opts = options
        self.lines: list[str] = []
        self.entries: list[LineMapEntry] = []

    def _emit(self, depth: int, text: str, path: tuple[int, ...], kind: str) -> None:
        indent = " " * (self._opts.indent_width * depth)
        self.lines.append(indent + text)
        self.entries.append(LineMapEntry(len(self.lines), path, kind))

    def render(self, program: PseudoProgram) -> tuple[str, LineMap]:
        self._emit(0, f"GOAL: {program.goal.text};", (), GOAL_HEADER)
        self._emit(0, "STEPS:", (), STEPS_HEADER)
        for i, stmt in enumerate(program.steps):
            self._statement(stmt, (i,), 0)
        text = "\n".join(self.lines) + "\n"
        if self._opts.with_line_numbers:
            width = len(str(len(self.lines)))
            text = "\n".join(f"{n:>{width}}  {line}"
                             for n, line in enumerate(self.lines, 1)) + "\n"
        return text, LineMap(tuple(self.entries))

    def _statement(self, stmt: Statement, path: tuple[int, ...], depth: int) -> None:
        if isinstance(stmt, Simple):
            self._emit(depth, f"{stmt.description.text};", path, SIMPLE)
            return
        if isinstance(stmt, While):
            self._emit(depth, f"while ({stmt.cond.description.text};) {{", path, BLOCK_OPEN)
            self._block(stmt.body, path, 0, depth)
            self._emit(depth, "}", path, BLOCK_CLOSE)
            return
        if isinstance(stmt, For):
            self._emit(depth, f"for ({stmt.cond.description.text};) {{", path, BLOCK_OPEN)
            self._block(stmt.body, path, 0, depth)
            self._emit(depth, "}", path, BLOCK_CLOSE)
            return
        if isinstance(stmt, If):
            self._emit(depth, f"if ({stmt.cond.description.text};) {{", path, BLOCK_OPEN)
            flat = self._block(stmt.then, path, 0, depth)
            self._emit(depth, "}", path, BLOCK_CLOSE)
            for cond, body in stmt.elifs:
                self._emit(depth, f"elif ({cond.description.text};) {{", path, ELIF_OPEN)
                flat = self._block(body, path, flat, depth)
                self._emit(depth, "}", path, BLOCK_CLOSE)
            if stmt.else_ is not None:
                self._emit(depth, "else {", path, ELSE_OPEN)
                self._block(stmt.else_, path, flat, depth)
                self._emit(depth, "}", path, BLOCK_CLOSE)
            return
        raise TypeError(f"not a statement: {stmt!r}")

    def _block(self, block: tuple[Statement, ...], parent: tuple[int, ...],
               flat_offset: int, depth: int) -> int:
        for j, child in enumerate(block):
            self._statement(child, parent + (flat_offset + j,), depth + 1)
        return flat_offset + len(block)


def render(program: PseudoProgram,
           options: RenderOptions = RenderOptions()) -> tuple[str, LineMap]:
    """Render a program to its canonical text plus the line map."""
    return _Renderer(options).render(program)


def render_text(program: PseudoProgram,
                options: RenderOptions = RenderOptions()) -> str:
    return render(program, options)[0]


# --- range selection ------------------------------------------------------

@dataclass(frozen=True)
class BlockSelection:
    """Whole statements selected by a line range.

    `chain` addresses the containing block: each (index, key) pair descends
    from the current block into statement `index`'s sub-block `key`; an empty
    chain means the top-level step list. `start_index` is the position of the
    first selected statement inside that block, `flat_start`/`parent_path`
    give the flat-index addressing used by the LineMap.
    """

    statements: tuple[Statement, ...]
    chain: tuple[tuple[int, object], ...]
    start_index: int
    parent_path: tuple[int, ...]
    flat_start: int
    line_range: LineRange
    widened: bool


def slice_range(program: PseudoProgram, line_map: LineMap,
                line_range: LineRange) -> BlockSelection:
    """Resolve a line range to the minimal covering whole-statement run."""
    n = line_map.line_count
    if line_range.start > n or line_range.end > n:
        raise RangeError(
            f"range {line_range} is outside the document (1-{n})")
    picked = [line_map.entry(i) for i in range(line_range.start, line_range.end + 1)]
    touched = {e.path for e in picked if not _is_header(e)}
    if not touched:
        raise RangeError(f"range {line_range} covers only header lines")

    maximal = {p for p in touched
               if not any(q != p and p[:len(q)] == q for q in touched)}

    widened = False
    spans = {}
    for p in sorted(maximal):
        span = line_map.span_of(p)
        spans[p] = span
        if span.start < line_range.start or span.end > line_range.end:
            widened = True

    parents = {p[:-1] for p in maximal}
    if len(parents) != 1:
        raise RangeError(f"range {line_range} does not select statements from a single block")
    parent_path = parents.pop()

    flat_indices = sorted(p[-1] for p in maximal)
    if flat_indices != list(range(flat_indices[0], flat_indices[-1] + 1)):
        raise RangeError(f"range {line_range} selects a non-contiguous statement run")

    chain, block, start_index = _resolve_container(program, parent_path, flat_indices[0])
    count = len(flat_indices)
    statements = block[start_index:start_index + count]
    widened_range = LineRange(min(s.start for s in spans.values()),
                              max(s.end for s in spans.values()))
    return BlockSelection(
        statements=statements,
        chain=chain,
        start_index=start_index,
        parent_path=parent_path,
        flat_start=flat_indices[0],
        line_range=widened_range,
        widened=widened,
    )


def _resolve_container(program: PseudoProgram, parent_path: tuple[int, ...],
                       first_flat: int):
    """Walk a flat parent path down to the (chain, block, local index) triple."""
    chain: list[tuple[int, object]] = []
    block = program.steps
    stmt: Optional[Statement] = None
    local = -1
    for depth, comp in enumerate(parent_path):
        if depth == 0:
            local = comp
        else:
            key, local = decode_flat_index(stmt, comp)
            chain.append((chain_local, key))
            block = get_block(stmt, key)
        chain_local = local
        stmt = block[local]
    if stmt is None:
        return (), program.steps, first_flat
    key, start_index = decode_flat_index(stmt, first_flat)
    chain.append((chain_local, key))
    return tuple(chain), get_block(stmt, key), start_index


def splice(program: PseudoProgram, selection: BlockSelection,
           replacement: Sequence[Statement]) -> PseudoProgram:
    """Replace the selected statements with `replacement`, rebuilding the AST."""
    new_steps = _rebuild(program.steps, selection.chain, selection.start_index,
                         len(selection.statements), tuple(replacement))
    return PseudoProgram(program.goal, new_steps)


def _rebuild(block: tuple[Statement, ...], chain, start: int, count: int,
             replacement: tuple[Statement, ...]) -> tuple[Statement, ...]:
    if not chain:
        return block[:start] + replacement + block[start + count:]
    (idx, key), rest = chain[0], chain[1:]
    inner = _rebuild(get_block(block[idx], key), rest, start, count, replacement)
    return block[:idx] + (with_block(block[idx], key, inner),) + block[idx + 1:]


def replaced_span(program: PseudoProgram, parent_path: tuple[int, ...],
                  flat_start: int, count: int) -> LineRange:
    """Rendered span of the statements at flat positions [flat_start, +count)."""
    _, line_map = render(program)
    paths = [parent_path + (flat_start + i,) for i in range(count)]
    spans = [line_map.span_of(p) for p in paths]
    return LineRange(min(s.start for s in spans), max(s.end for s in spans))
