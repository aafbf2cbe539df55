"""Session state and the operations the service and CLI drive.

A session owns one source file snapshot, the current pseudocode, the zoom
cache, the pending diff preview (at most one) and an append-only history.
It also keeps a *baseline* program: the pseudocode the source currently
corresponds to. Translation and zooming move the baseline together with the
program (they change the view, not the code); user edits move only the
program, and the divergence between baseline and program is exactly what an
apply turns into revision prompts. Confirming a preview re-synchronizes the
baseline.

Sessions persist as one JSON file each under a state directory; writes go
through a temp file and an atomic rename so a crash can never leave a
half-written session behind. The workspace is the single implementation of
the editing loop; the HTTP service and the CLI's embedded mode are both thin
shells over it. Operations on one session are serialized with a per-session
lock.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidStateError
from .grammar import (
    LineRange,
    PseudoProgram,
    from_interchange,
    program_fingerprint,
    to_interchange,
)
from .llm import LlmClient
from .pipeline import SourceDocument, code_to_pseudo, pseudo_to_code
from .revision import CONFIRMED, REJECTED, DiffPreview, EditOp, diff_pseudo, propose_revision
from .zoom import COLLAPSE, EXPAND, ZoomCache, ZoomResult, collapse, expand


@dataclass(frozen=True)
class HistoryEvent:
    timestamp: float
    kind: str
    digest: str


@dataclass
class Session:
    id: str
    source: SourceDocument
    program: Optional[PseudoProgram] = None
    baseline: Optional[PseudoProgram] = None
    zoom_cache: ZoomCache = field(default_factory=ZoomCache)
    pending_preview: Optional[DiffPreview] = None
    pending_ops: list[EditOp] = field(default_factory=list)
    history: list[HistoryEvent] = field(default_factory=list)

    def state_digest(self) -> str:
        program_part = program_fingerprint(self.program) if self.program else "none"
        return f"{self.source.content_hash}:{program_part}"

    def record(self, kind: str) -> None:
        self.history.append(HistoryEvent(time.time(), kind, self.state_digest()))

    def edits_since_baseline(self) -> list[EditOp]:
        if self.program is None or self.baseline is None:
            return []
        return diff_pseudo(self.baseline, self.program)

    def to_payload(self) -> dict:
        return {
            "id": self.id,
            "source": {"path": self.source.path,
                       "language_hint": self.source.language_hint,
                       "text": self.source.text},
            "program": to_interchange(self.program) if self.program else None,
            "baseline": to_interchange(self.baseline) if self.baseline else None,
            "zoom_cache": self.zoom_cache.to_payload(),
            "pending_preview": (self.pending_preview.to_payload()
                                if self.pending_preview else None),
            "pending_ops": [op.to_payload() for op in self.pending_ops],
            "history": [{"timestamp": e.timestamp, "kind": e.kind, "digest": e.digest}
                        for e in self.history],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "Session":
        src = payload["source"]
        preview = payload.get("pending_preview")
        return cls(
            id=payload["id"],
            source=SourceDocument.from_text(src["path"], src["text"], src["language_hint"]),
            program=(from_interchange(payload["program"])
                     if payload.get("program") else None),
            baseline=(from_interchange(payload["baseline"])
                      if payload.get("baseline") else None),
            zoom_cache=ZoomCache.from_payload(payload.get("zoom_cache", [])),
            pending_preview=DiffPreview.from_payload(preview) if preview else None,
            pending_ops=[EditOp.from_payload(p) for p in payload.get("pending_ops", [])],
            history=[HistoryEvent(e["timestamp"], e["kind"], e["digest"])
                     for e in payload.get("history", [])],
        )


class SessionStore:
    """One JSON file per session under `state_dir`, written atomically."""

    def __init__(self, state_dir: str):
        self.state_dir = state_dir
        os.makedirs(state_dir, exist_ok=True)

    def _path(self, session_id: str) -> str:
        return os.path.join(self.state_dir, f"{session_id}.json")

    def save(self, session: Session) -> None:
        payload = json.dumps(session.to_payload(), indent=2, ensure_ascii=False)
        fd, tmp = tempfile.mkstemp(dir=self.state_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
                fh.write("\n")
            os.replace(tmp, self._path(session.id))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def load(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not os.path.exists(path):
            raise KeyError(f"no session {session_id}")
        with open(path, encoding="utf-8") as fh:
            return Session.from_payload(json.load(fh))

    def exists(self, session_id: str) -> bool:
        return os.path.exists(self._path(session_id))

    def list_ids(self) -> list[str]:
        return sorted(name[:-5] for name in os.listdir(self.state_dir)
                      if name.endswith(".json"))

    def find_by_source_path(self, source_path: str) -> Optional[str]:
        wanted = os.path.abspath(source_path)
        for session_id in self.list_ids():
            source = self.load(session_id).source
            if os.path.abspath(source.path) == wanted:
                return session_id
        return None


TO_PSEUDO = "to_pseudo"
TO_CODE = "to_code"


class Workspace:
    """The editing loop over persisted sessions."""

    def __init__(self, store: SessionStore, client: LlmClient):
        self.store = store
        self.client = client
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    # -- lifecycle --------------------------------------------------------

    def create_session(self, source_path: str) -> Session:
        if not os.path.exists(source_path):
            raise FileNotFoundError(source_path)
        source = SourceDocument.from_file(source_path)
        session = Session(id=uuid.uuid4().hex[:12], source=source)
        session.record("created")
        self.store.save(session)
        return session

    def get(self, session_id: str) -> Session:
        return self.store.load(session_id)

    # -- workflow steps ----------------------------------------------------

    def translate(self, session_id: str, direction: str):
        with self._lock(session_id):
            session = self.store.load(session_id)
            if session.pending_preview is not None:
                raise InvalidStateError("a pending preview must be confirmed or "
                                        "rejected before translating")
            if direction == TO_PSEUDO:
                result = code_to_pseudo(session.source, session.program, self.client)
                session.program = result.program
                session.baseline = result.program
                session.pending_ops.clear()
                session.record("translated-to-pseudocode")
                self.store.save(session)
                return session, result
            if direction == TO_CODE:
                if session.program is None:
                    raise InvalidStateError("the session has no pseudocode to "
                                            "generate code from")
                generated = pseudo_to_code(session.program, session.source, self.client)
                preview = DiffPreview(old_source=session.source,
                                      new_source_text=generated.text)
                session.pending_preview = preview
                session.record("preview-created")
                self.store.save(session)
                return session, preview
            raise ValueError(f"unknown direction {direction!r}")

    def zoom(self, session_id: str, op: str, line_range: LineRange) -> ZoomResult:
        if op not in (EXPAND, COLLAPSE):
            raise ValueError(f"unknown zoom operation {op!r}")
        with self._lock(session_id):
            session = self.store.load(session_id)
            if session.program is None:
                raise InvalidStateError("the session has no pseudocode to zoom")
            if session.edits_since_baseline():
                raise InvalidStateError("apply or revert the pending pseudocode "
                                        "edits before zooming")
            fn = expand if op == EXPAND else collapse
            result = fn(session.program, session.source, line_range,
                        session.zoom_cache, self.client)
            session.program = result.program
            session.baseline = result.program
            session.record(f"zoom-{op}")
            self.store.save(session)
            return result

    def put_pseudocode(self, session_id: str, program: PseudoProgram) -> list[EditOp]:
        """Replace the session's pseudocode; returns the edits of this save."""
        with self._lock(session_id):
            session = self.store.load(session_id)
            ops = diff_pseudo(session.program, program) if session.program else []
            session.program = program
            session.pending_ops.extend(ops)
            session.record("pseudocode-edited")
            self.store.save(session)
            return ops

    def apply(self, session_id: str) -> DiffPreview:
        with self._lock(session_id):
            session = self.store.load(session_id)
            if session.pending_preview is not None:
                raise InvalidStateError("a pending preview already exists")
            ops = session.edits_since_baseline()
            if not ops:
                raise InvalidStateError("no pseudocode edits since the last apply")
            preview = propose_revision(session.source, session.baseline,
                                       ops, self.client)
            session.pending_ops.clear()
            session.pending_preview = preview
            session.record("preview-created")
            self.store.save(session)
            return preview

    def confirm(self, session_id: str) -> Session:
        with self._lock(session_id):
            session = self.store.load(session_id)
            preview = self._pending(session)
            preview.mark(CONFIRMED)
            with open(session.source.path, "w", encoding="utf-8") as fh:
                fh.write(preview.new_source_text)
            session.source = session.source.with_text(preview.new_source_text)
            session.baseline = session.program
            session.pending_preview = None
            session.record("confirmed")
            self.store.save(session)
            return session

    def reject(self, session_id: str) -> Session:
        with self._lock(session_id):
            session = self.store.load(session_id)
            preview = self._pending(session)
            preview.mark(REJECTED)
            session.pending_preview = None
            session.record("rejected")
            self.store.save(session)
            return session

    @staticmethod
    def _pending(session: Session) -> DiffPreview:
        if session.pending_preview is None:
            raise InvalidStateError("there is no pending preview")
        return session.pending_preview
