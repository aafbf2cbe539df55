"""Command-line front door.

Runs embedded by default: commands drive the session workspace directly
against a local state directory, which keeps scripted runs free of any
server lifecycle. Pass ``--service-url`` to talk to a running service
instead. A transcript file (``--transcript``) swaps the live model for the
deterministic scripted backend; combining it with ``--service-url`` is
rejected since the service owns its own backend.

Exit codes: 0 success, 2 user/parse error, 3 LLM/backend error,
4 invalid session state.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Optional

import click

from .config import ServiceConfig, load_config
from .errors import (
    InvalidStateError,
    LlmError,
    ParseError,
    PipelineError,
    RangeError,
    SchemaError,
    SummaryShapeError,
)
from .grammar import LineRange, RenderOptions, parse, render
from .llm import HttpBackend, LlmClient, ScriptedBackend, Transcript
from .sessions import SessionStore, Workspace

EXIT_OK = 0
EXIT_USER = 2
EXIT_BACKEND = 3
EXIT_STATE = 4

OUTPUT_TEXT = "text"
OUTPUT_INTERCHANGE = "interchange"


@dataclass
class CliContext:
    config: ServiceConfig
    output: str
    service_url: Optional[str]
    transcript_path: Optional[str]

    _workspace: Optional[Workspace] = None

    def workspace(self) -> Workspace:
        if self._workspace is None:
            if self.transcript_path:
                backend = ScriptedBackend(Transcript.load(self.transcript_path))
            else:
                backend = HttpBackend()
            client = LlmClient(self.config.llm, backend)
            self._workspace = Workspace(SessionStore(self.config.state_dir), client)
        return self._workspace


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _run(ctx: CliContext, fn):
    try:
        fn()
    except CliFailure as exc:
        click.echo(f"error: {exc.message}", err=True)
        sys.exit(exc.code)
    except (ParseError, RangeError, SchemaError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USER)
    except FileNotFoundError as exc:
        click.echo(f"error: file not found: {exc}", err=True)
        sys.exit(EXIT_USER)
    except KeyError as exc:
        click.echo(f"error: unknown session {exc.args[0] if exc.args else ''}", err=True)
        sys.exit(EXIT_USER)
    except (LlmError, PipelineError, SummaryShapeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BACKEND)
    except InvalidStateError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_STATE)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Path to a JSON config file.")
@click.option("--state-dir", default=None, help="Session state directory.")
@click.option("--transcript", "transcript_path", type=click.Path(exists=True), default=None,
              help="Scripted responses file; replaces the live model.")
@click.option("--service-url", default=None, help="Drive a running service over HTTP.")
@click.option("--output", type=click.Choice([OUTPUT_TEXT, OUTPUT_INTERCHANGE]),
              default=OUTPUT_TEXT, help="Output format.")
@click.pass_context
def main(ctx, config_path, state_dir, transcript_path, service_url, output):
    """Edit code through grammar-checked, semantically zoomable pseudocode."""
    if transcript_path and service_url:
        click.echo("error: --transcript and --service-url are mutually exclusive", err=True)
        sys.exit(EXIT_USER)
    config = load_config(config_path)
    if state_dir:
        from dataclasses import replace
        config = replace(config, state_dir=state_dir)
    ctx.obj = CliContext(config=config, output=output, service_url=service_url,
                         transcript_path=transcript_path)


def _numbered(program) -> str:
    return render(program, RenderOptions(with_line_numbers=True))[0]


def _print_preview(ctx: CliContext, preview_payload: dict) -> None:
    if ctx.output == OUTPUT_INTERCHANGE:
        click.echo(json.dumps(preview_payload, indent=2))
        return
    unified = preview_payload.get("unified", "")
    if unified:
        click.echo(unified, nl=False)
    else:
        click.echo("no changes")


# --- remote plumbing -------------------------------------------------------

def _remote(ctx: CliContext, method: str, path: str, body: Optional[dict] = None) -> dict:
    import requests

    url = ctx.service_url.rstrip("/") + path
    try:
        response = requests.request(method, url, json=body, timeout=120)
    except requests.RequestException as exc:
        raise CliFailure(EXIT_BACKEND, f"cannot reach service: {exc}")
    if response.status_code >= 400:
        try:
            payload = response.json()
            message = f"{payload.get('error_kind')}: {payload.get('message')}"
        except ValueError:
            message = f"HTTP {response.status_code}"
        code = {409: EXIT_STATE, 502: EXIT_BACKEND}.get(response.status_code, EXIT_USER)
        raise CliFailure(code, message)
    return response.json()


# --- commands ----------------------------------------------------------------

@main.command()
@click.argument("file", type=click.Path())
@click.option("--from-pseudo", is_flag=True,
              help="Generate code from the session's pseudocode instead.")
@click.pass_obj
def translate(ctx: CliContext, file, from_pseudo):
    """Create/reuse a session for FILE and translate between its two forms."""
    def go():
        direction = "to_code" if from_pseudo else "to_pseudo"
        if ctx.service_url:
            view = _remote(ctx, "POST", "/sessions", {"source_path": file})
            session_id = view["session_id"]
            result = _remote(ctx, "POST", f"/sessions/{session_id}/translate",
                             {"direction": direction})
            click.echo(f"session: {session_id}", err=True)
            if direction == "to_pseudo":
                program = parse(result["program"]["text"])
                _echo_program(ctx, program)
            else:
                _print_preview(ctx, result["pending_preview"])
            return
        workspace = ctx.workspace()
        session_id = workspace.store.find_by_source_path(file)
        if session_id is None:
            session_id = workspace.create_session(file).id
        click.echo(f"session: {session_id}", err=True)
        if direction == "to_pseudo":
            session, _ = workspace.translate(session_id, "to_pseudo")
            _echo_program(ctx, session.program)
        else:
            preview = workspace.translate(session_id, "to_code")[1]
            _print_preview(ctx, preview.to_payload() | {"unified": preview.unified_text()})
    _run(ctx, go)


def _echo_program(ctx: CliContext, program) -> None:
    if ctx.output == OUTPUT_INTERCHANGE:
        from .grammar import to_interchange
        click.echo(json.dumps(to_interchange(program), indent=2))
    else:
        click.echo(_numbered(program), nl=False)


def _parse_lines(spec: str) -> LineRange:
    try:
        if "-" in spec:
            start_text, end_text = spec.split("-", 1)
            return LineRange(int(start_text), int(end_text))
        line = int(spec)
        return LineRange(line, line)
    except ValueError:
        raise RangeError(f"--lines must look like N or N-M, got {spec!r}")


@main.command()
@click.argument("session_id")
@click.option("--expand", "op", flag_value="expand")
@click.option("--collapse", "op", flag_value="collapse")
@click.option("--lines", required=True, help="Line or line range, N or N-M.")
@click.pass_obj
def zoom(ctx: CliContext, session_id, op, lines):
    """Expand or collapse the selected pseudocode lines."""
    def go():
        if not op:
            raise CliFailure(EXIT_USER, "pass --expand or --collapse")
        line_range = _parse_lines(lines)
        if ctx.service_url:
            view = _remote(ctx, "POST", f"/sessions/{session_id}/zoom",
                           {"op": op, "start": line_range.start, "end": line_range.end})
            changed = view["changed_range"]
            text_lines = view["program"]["text"].split("\n")[:-1]
        else:
            result = ctx.workspace().zoom(session_id, op, line_range)
            changed = {"start": result.changed_range.start, "end": result.changed_range.end}
            text_lines = render(result.program)[0].split("\n")[:-1]
        if ctx.output == OUTPUT_INTERCHANGE:
            click.echo(json.dumps({"changed_range": changed}, indent=2))
            return
        width = len(str(len(text_lines)))
        for number in range(changed["start"], changed["end"] + 1):
            click.echo(f"{number:>{width}}  {text_lines[number - 1]}")
    _run(ctx, go)


@main.command()
@click.argument("session_id")
@click.option("--file", "pseudo_file", required=True, type=click.Path(exists=True),
              help="Edited pseudocode file to store.")
@click.pass_obj
def edit(ctx: CliContext, session_id, pseudo_file):
    """Store edited pseudocode; prints the classified edits."""
    def go():
        with open(pseudo_file, encoding="utf-8") as fh:
            text = fh.read()
        if ctx.service_url:
            result = _remote(ctx, "PUT", f"/sessions/{session_id}/pseudocode",
                             {"text": text})
            ops = result["edit_ops"]
        else:
            program = parse(text)
            ops = [op.to_payload() for op in
                   ctx.workspace().put_pseudocode(session_id, program)]
        if ctx.output == OUTPUT_INTERCHANGE:
            click.echo(json.dumps({"edit_ops": ops}, indent=2))
        elif not ops:
            click.echo("no edits")
        else:
            for op in ops:
                rng = op["range"]
                span = (str(rng["start"]) if rng["start"] == rng["end"]
                        else f"{rng['start']}-{rng['end']}")
                click.echo(f"{op['kind']} at lines {span}")
    _run(ctx, go)


@main.command()
@click.argument("session_id")
@click.pass_obj
def apply(ctx: CliContext, session_id):
    """Propagate stored pseudocode edits to the source; shows the preview."""
    def go():
        if ctx.service_url:
            view = _remote(ctx, "POST", f"/sessions/{session_id}/apply")
            _print_preview(ctx, view["pending_preview"])
        else:
            preview = ctx.workspace().apply(session_id)
            _print_preview(ctx, preview.to_payload() | {"unified": preview.unified_text()})
    _run(ctx, go)


@main.command()
@click.argument("session_id")
@click.pass_obj
def diff(ctx: CliContext, session_id):
    """Show the pending source preview, if any."""
    def go():
        if ctx.service_url:
            view = _remote(ctx, "GET", f"/sessions/{session_id}")
            preview = view["pending_preview"]
        else:
            session = ctx.workspace().get(session_id)
            preview = None
            if session.pending_preview is not None:
                preview = session.pending_preview.to_payload() | {
                    "unified": session.pending_preview.unified_text()}
        if preview is None:
            click.echo("none")
        else:
            _print_preview(ctx, preview)
    _run(ctx, go)


@main.command()
@click.argument("session_id")
@click.pass_obj
def confirm(ctx: CliContext, session_id):
    """Write the pending preview to the source file."""
    def go():
        if ctx.service_url:
            view = _remote(ctx, "POST", f"/sessions/{session_id}/preview/confirm")
            click.echo(f"confirmed; source hash {view['content_hash'][:12]}")
        else:
            session = ctx.workspace().confirm(session_id)
            click.echo(f"confirmed; source hash {session.source.content_hash[:12]}")
    _run(ctx, go)


@main.command()
@click.argument("session_id")
@click.pass_obj
def reject(ctx: CliContext, session_id):
    """Discard the pending preview."""
    def go():
        if ctx.service_url:
            _remote(ctx, "POST", f"/sessions/{session_id}/preview/reject")
        else:
            ctx.workspace().reject(session_id)
        click.echo("rejected")
    _run(ctx, go)


@main.command()
@click.pass_obj
def sessions(ctx: CliContext):
    """List known session ids."""
    def go():
        if ctx.service_url:
            ids = _remote(ctx, "GET", "/sessions")["sessions"]
        else:
            ids = SessionStore(ctx.config.state_dir).list_ids()
        for session_id in ids:
            click.echo(session_id)
    _run(ctx, go)


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--static-dir", default=None, help="Directory with the built web UI.")
@click.pass_obj
def serve(ctx: CliContext, host, port, static_dir):
    """Run the local HTTP service (loopback by default)."""
    import os

    import uvicorn
    from dataclasses import replace

    from .service import create_app

    config = ctx.config
    if ctx.transcript_path:
        config = replace(config, transcript_path=ctx.transcript_path)
    chosen_static = static_dir or config.static_dir
    if not chosen_static and os.path.isdir("frontend/dist"):
        chosen_static = "frontend/dist"
    if chosen_static:
        config = replace(config, static_dir=chosen_static)
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


if __name__ == "__main__":
    main()
