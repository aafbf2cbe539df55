"""Pseudocode language: AST, parser, canonical renderer, interchange form."""

from .interchange import (
    from_interchange,
    steps_from_interchange,
    steps_to_interchange,
    to_interchange,
)
from .nodes import (
    Cond,
    Description,
    For,
    If,
    PseudoProgram,
    Simple,
    Statement,
    While,
    fingerprint,
    iter_statements,
    lint,
    program_fingerprint,
    statement_count,
)
from .parser import parse
from .render import (
    BlockSelection,
    LineMap,
    LineMapEntry,
    LineRange,
    RenderOptions,
    render,
    render_text,
    replaced_span,
    slice_range,
    splice,
)

__all__ = [
    "BlockSelection",
    "Cond",
    "Description",
    "For",
    "If",
    "LineMap",
    "LineMapEntry",
    "LineRange",
    "PseudoProgram",
    "RenderOptions",
    "Simple",
    "Statement",
    "While",
    "fingerprint",
    "from_interchange",
    "iter_statements",
    "lint",
    "parse",
    "program_fingerprint",
    "render",
    "render_text",
    "replaced_span",
    "slice_range",
    "splice",
    "statement_count",
    "steps_from_interchange",
    "steps_to_interchange",
    "to_interchange",
]
