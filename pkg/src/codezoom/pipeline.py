"""Bidirectional translation between source code and pseudocode.

Prompt construction is a pure function of its inputs; the wording lives in
text resources under ``codezoom/prompts`` so golden tests can pin every
template. Responses on the code-to-pseudocode direction are constrained to
the interchange schema and validated by the client; the reverse direction
takes the reply verbatim as file text after stripping one outer code fence.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .errors import LlmError, PipelineError
from .grammar import PseudoProgram, from_interchange, render_text
from .llm import SCHEMA_PROGRAM, ChatRequest, LlmClient, strip_code_fences

_LANGUAGE_BY_SUFFIX = {
    ".c": "c",
    ".cc": "cpp",
    ".cpp": "cpp",
    ".go": "go",
    ".h": "c",
    ".java": "java",
    ".js": "javascript",
    ".py": "python",
    ".rb": "ruby",
    ".rs": "rust",
    ".sh": "shell",
    ".ts": "typescript",
}


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def guess_language(path: str) -> str:
    dot = path.rfind(".")
    if dot >= 0:
        return _LANGUAGE_BY_SUFFIX.get(path[dot:].lower(), "text")
    return "text"


@dataclass(frozen=True)
class SourceDocument:
    """A single source file snapshot; `text` is the only source of truth."""

    path: str
    language_hint: str
    text: str
    content_hash: str = field(default="")

    def __post_init__(self):
        object.__setattr__(self, "content_hash", content_hash(self.text))

    @classmethod
    def from_file(cls, path: str, language_hint: Optional[str] = None) -> "SourceDocument":
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        return cls(path=path, language_hint=language_hint or guess_language(path), text=text)

    @classmethod
    def from_text(cls, path: str, text: str,
                  language_hint: Optional[str] = None) -> "SourceDocument":
        return cls(path=path, language_hint=language_hint or guess_language(path), text=text)

    def with_text(self, text: str) -> "SourceDocument":
        return SourceDocument(path=self.path, language_hint=self.language_hint, text=text)


@dataclass(frozen=True)
class TranslationResult:
    program: PseudoProgram
    attempts: int
    raw_response: str

    def __post_init__(self):
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")


def load_prompt(name: str) -> str:
    return resources.files("codezoom.prompts").joinpath(f"{name}.txt").read_text("utf-8")


def fill(template: str, **values: str) -> str:
    out = template
    for key, value in values.items():
        out = out.replace("{{" + key.upper() + "}}", value)
    return out


def grammar_system_prompt(name: str) -> str:
    """A system template with the grammar and reply-schema fragments filled in."""
    return fill(load_prompt(name), grammar=load_prompt("_grammar").rstrip("\n"),
                schema=load_prompt("_schema").rstrip("\n"))


def build_translation_request(source: SourceDocument,
                              previous: Optional[PseudoProgram] = None) -> ChatRequest:
    previous_section = ""
    if previous is not None:
        previous_section = fill(load_prompt("translate_previous"),
                                previous=render_text(previous).rstrip("\n"))
    user = fill(load_prompt("translate_user"), language=source.language_hint,
                source=source.text.rstrip("\n"), previous_section=previous_section)
    return ChatRequest(system_text=grammar_system_prompt("translate_system"),
                       user_text=user, response_schema=SCHEMA_PROGRAM)


def code_to_pseudo(source: SourceDocument, previous: Optional[PseudoProgram],
                   client: LlmClient) -> TranslationResult:
    """Translate source text into a grammar-conforming program."""
    if not source.text:
        raise PipelineError("empty-source", f"{source.path} has no content")
    request = build_translation_request(source, previous)
    try:
        response = client.complete(request)
    except LlmError as exc:
        if exc.kind == "schema-after-retries":
            raise PipelineError("schema-after-retries",
                                f"no attempt produced a valid program: {exc.message}",
                                attempts=exc.attempts)
        raise
    program = from_interchange(response.structured)
    return TranslationResult(program=program, attempts=response.attempts,
                             raw_response=response.text)


def build_generation_request(program: PseudoProgram,
                             existing: Optional[SourceDocument] = None,
                             language_hint: Optional[str] = None) -> ChatRequest:
    language = language_hint or (existing.language_hint if existing else "python")
    existing_section = ""
    if existing is not None and existing.text.strip():
        existing_section = fill(load_prompt("generate_existing"), language=language,
                                existing=existing.text.rstrip("\n"))
    user = fill(load_prompt("generate_user"), language=language,
                pseudocode=render_text(program).rstrip("\n"),
                existing_section=existing_section)
    return ChatRequest(system_text=load_prompt("generate_system"), user_text=user)


def pseudo_to_code(program: PseudoProgram, existing: Optional[SourceDocument],
                   client: LlmClient, *, path: Optional[str] = None,
                   language_hint: Optional[str] = None) -> SourceDocument:
    """Generate (or minimally revise) source text from a program."""
    request = build_generation_request(program, existing, language_hint)
    response = client.complete(request)
    text = strip_code_fences(response.text)
    out_path = path or (existing.path if existing else "generated.txt")
    language = language_hint or (existing.language_hint if existing else guess_language(out_path))
    return SourceDocument.from_text(out_path, text, language)
