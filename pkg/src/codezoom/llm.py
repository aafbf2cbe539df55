"""Chat-completion client with structured-output enforcement.

One HTTP backend speaks the least-common-denominator chat shape
(``{model, messages, response_format?}`` in, ``{choices:[{message:
{content}}]}`` out) so any vendor can sit behind a tiny adapter. A scripted
backend replays canned responses from a transcript for deterministic offline
runs, and a record/replay pair captures live exchanges into cassette files.

Structured output is enforced client-side: when a request carries a response
schema, the reply must validate, otherwise the call is retried with the
violation appended as a corrective note, up to ``max_retries`` times. No
malformed document ever escapes this module.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, replace
from typing import Any, Optional, Protocol

import requests

from .errors import LlmError, SchemaError
from .grammar import from_interchange, steps_from_interchange

DEFAULT_API_KEY_VAR = "CODEZOOM_API_KEY"

# Response schema names a request may carry.
SCHEMA_PROGRAM = "program"        # one interchange document {goal, steps}
SCHEMA_STEPS = "steps"            # an array of statement nodes
SCHEMA_SINGLE_STEP = "single-step"  # an array holding exactly one node


@dataclass(frozen=True)
class LlmConfig:
    endpoint_url: str = "http://127.0.0.1:8080/v1/chat/completions"
    model_name: str = "local-model"
    api_key_ref: str = DEFAULT_API_KEY_VAR
    timeout: float = 60.0
    max_retries: int = 2
    temperature: float = 0.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must be within [0, 2]")


@dataclass(frozen=True)
class ChatRequest:
    system_text: str
    user_text: str
    response_schema: Optional[str] = None

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("user_text must be nonempty")

    def key(self) -> str:
        """Canonical serialization used for cassette matching."""
        return json.dumps({"system_text": self.system_text, "user_text": self.user_text},
                          sort_keys=True, ensure_ascii=False)


@dataclass(frozen=True)
class ChatResponse:
    text: str
    structured: Any = None
    usage: Optional[dict] = None
    latency: float = 0.0
    attempts: int = 1


@dataclass(frozen=True)
class TranscriptEntry:
    response_text: str
    match: Optional[str] = None


@dataclass(frozen=True)
class Transcript:
    entries: tuple[TranscriptEntry, ...]

    @classmethod
    def load(cls, path: str) -> "Transcript":
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise LlmError("transcript-invalid", f"cannot load transcript {path}: {exc}")
        return cls.from_payload(raw, where=path)

    @classmethod
    def from_payload(cls, raw: Any, where: str = "<transcript>") -> "Transcript":
        if not isinstance(raw, list):
            raise LlmError("transcript-invalid", f"{where}: transcript must be a list")
        entries = []
        for i, item in enumerate(raw):
            if not isinstance(item, dict) or "response" not in item:
                raise LlmError("transcript-invalid",
                               f"{where}: entry {i} must be an object with a 'response'")
            response = item["response"]
            if not isinstance(response, str):
                # fixtures may inline structured responses as objects
                response = json.dumps(response, ensure_ascii=False)
            entries.append(TranscriptEntry(response_text=response, match=item.get("match")))
        return cls(tuple(entries))


class Backend(Protocol):
    def send(self, config: LlmConfig, request: ChatRequest) -> tuple[str, Optional[dict]]:
        """Return (raw response text, usage) or raise LlmError."""


class ScriptedBackend:
    """Deterministic backend that serves a transcript strictly in order."""

    def __init__(self, transcript: Transcript):
        self._entries = transcript.entries
        self._index = 0
        self._lock = threading.Lock()

    @property
    def consumed(self) -> int:
        return self._index

    @property
    def remaining(self) -> int:
        return len(self._entries) - self._index

    def send(self, config: LlmConfig, request: ChatRequest) -> tuple[str, Optional[dict]]:
        with self._lock:
            if self._index >= len(self._entries):
                raise LlmError("transcript-exhausted",
                               f"transcript has no entry for request #{self._index + 1}")
            entry = self._entries[self._index]
            self._index += 1
        if entry.match is not None:
            haystack = request.system_text + "\n" + request.user_text
            if entry.match not in haystack:
                raise LlmError("transcript-mismatch",
                               f"request does not contain expected substring {entry.match!r}")
        return entry.response_text, None


class HttpBackend:
    """POSTs the request to a chat-completions endpoint."""

    def send(self, config: LlmConfig, request: ChatRequest) -> tuple[str, Optional[dict]]:
        api_key = os.environ.get(config.api_key_ref, "")
        if not api_key:
            raise LlmError("auth", f"environment variable {config.api_key_ref} is not set")
        messages = []
        if request.system_text:
            messages.append({"role": "system", "content": request.system_text})
        messages.append({"role": "user", "content": request.user_text})
        payload: dict = {"model": config.model_name, "messages": messages,
                         "temperature": config.temperature}
        if request.response_schema is not None:
            payload["response_format"] = {"type": "json_object"}
        try:
            resp = requests.post(config.endpoint_url, json=payload,
                                 headers={"Authorization": f"Bearer {api_key}"},
                                 timeout=config.timeout)
        except requests.RequestException as exc:
            raise LlmError("network", str(exc))
        if resp.status_code in (401, 403):
            raise LlmError("auth", f"endpoint rejected credentials (HTTP {resp.status_code})")
        if resp.status_code != 200:
            raise LlmError("network", f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            data = resp.json()
            text = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise LlmError("network", f"malformed completion response: {exc}")
        return text, data.get("usage")


class RecordingBackend:
    """Wraps a live backend and appends every exchange to a cassette file."""

    def __init__(self, inner: Backend, cassette_path: str):
        self._inner = inner
        self._path = cassette_path
        self._lock = threading.Lock()

    def send(self, config: LlmConfig, request: ChatRequest) -> tuple[str, Optional[dict]]:
        text, usage = self._inner.send(config, request)
        with self._lock:
            records = []
            if os.path.exists(self._path):
                with open(self._path, encoding="utf-8") as fh:
                    records = json.load(fh)
            records.append({"request_text": request.key(), "response_text": text})
            with open(self._path, "w", encoding="utf-8") as fh:
                json.dump(records, fh, indent=2, ensure_ascii=False)
                fh.write("\n")
        return text, usage


class ReplayBackend:
    """Serves recorded responses; requests must match the cassette byte-for-byte."""

    def __init__(self, cassette_path: str):
        try:
            with open(cassette_path, encoding="utf-8") as fh:
                records = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise LlmError("cassette-miss", f"cannot load cassette {cassette_path}: {exc}")
        self._records = [(r["request_text"], r["response_text"]) for r in records]
        self._used = [False] * len(self._records)
        self._lock = threading.Lock()

    def send(self, config: LlmConfig, request: ChatRequest) -> tuple[str, Optional[dict]]:
        key = request.key()
        with self._lock:
            for i, (req_text, resp_text) in enumerate(self._records):
                if not self._used[i] and req_text == key:
                    self._used[i] = True
                    return resp_text, None
        raise LlmError("cassette-miss", "no recorded response for this request")


def strip_code_fences(text: str) -> str:
    """Strip exactly the outermost triple-backtick fence pair, if present."""
    t = text.strip()
    if not t.startswith("```"):
        return text
    lines = t.split("\n")
    first = lines[0][3:].strip()
    if lines[-1].strip() != "```" or len(lines) < 2:
        return text
    if first and not first.replace("+", "").replace("-", "").replace("_", "").isalnum():
        return text
    inner = lines[1:-1]
    return "\n".join(inner) + ("\n" if inner else "")


def _extract_json(text: str) -> Any:
    """Pull the first JSON value out of a response, tolerating wrapper noise."""
    cleaned = strip_code_fences(text)
    starts = [i for i in (cleaned.find("{"), cleaned.find("[")) if i >= 0]
    if not starts:
        raise SchemaError("response contains no structured document", "", "json")
    try:
        value, _ = json.JSONDecoder().raw_decode(cleaned[min(starts):])
    except json.JSONDecodeError as exc:
        raise SchemaError(f"response is not valid structured output: {exc}", "", "json")
    return value


def validate_structured(schema: str, text: str) -> Any:
    """Validate raw response text against a named schema, returning the document."""
    value = _extract_json(text)
    if schema == SCHEMA_PROGRAM:
        from_interchange(value)
        return value
    if schema == SCHEMA_STEPS:
        steps_from_interchange(value, "steps")
        return value
    if schema == SCHEMA_SINGLE_STEP:
        statements = steps_from_interchange(value, "steps")
        if len(statements) != 1:
            raise SchemaError("must contain exactly one statement", "steps",
                              "single-statement")
        return value
    raise ValueError(f"unknown response schema {schema!r}")


class LlmClient:
    """Pairs a config with a backend and enforces structured output."""

    def __init__(self, config: LlmConfig, backend: Backend):
        self.config = config
        self.backend = backend

    def complete(self, request: ChatRequest) -> ChatResponse:
        attempts = 0
        current = request
        started = time.perf_counter()
        while True:
            attempts += 1
            text, usage = self.backend.send(self.config, current)
            if request.response_schema is None:
                return ChatResponse(text, None, usage,
                                    time.perf_counter() - started, attempts)
            try:
                structured = validate_structured(request.response_schema, text)
                return ChatResponse(text, structured, usage,
                                    time.perf_counter() - started, attempts)
            except SchemaError as violation:
                if attempts > self.config.max_retries:
                    raise LlmError(
                        "schema-after-retries",
                        f"response still invalid after {attempts} attempts: {violation}",
                        violation=violation, attempts=attempts)
                note = (f"\n\nThe previous reply was rejected: {violation.message}"
                        f" (at {violation.path or 'document root'})."
                        " Reply again with only a valid document.")
                current = replace(current, user_text=current.user_text + note)


def scripted_client(transcript: Transcript, config: LlmConfig | None = None) -> LlmClient:
    return LlmClient(config or LlmConfig(), ScriptedBackend(transcript))
