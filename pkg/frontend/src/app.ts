// Dual-pane editor: pseudocode on the left (editable), source on the right
// (read-only), three actions at the bottom, a selection popup for zooming
// and a modal for confirming proposed source changes. Every mutation flows
// through the service API; this module never edits source text itself.

import { ApiError, ServiceApi, SessionView, LineKind } from "./api.js";
import { selectionToLines, zoomableSpan } from "./selection.js";

interface AppState {
  sessionId: string | null;
  view: SessionView | null;
  busy: boolean;
  connected: boolean;
  error: string | null;
  parseErrorLine: number | null;
  changedRange: { start: number; end: number } | null;
}

export class App {
  readonly state: AppState = {
    sessionId: null,
    view: null,
    busy: false,
    connected: true,
    error: null,
    parseErrorLine: null,
    changedRange: null,
  };

  readonly pathInput: HTMLInputElement;
  readonly openButton: HTMLButtonElement;
  readonly banner: HTMLElement;
  readonly gutter: HTMLElement;
  readonly pseudoPane: HTMLTextAreaElement;
  readonly sourcePane: HTMLElement;
  readonly sourceTitle: HTMLElement;
  readonly visualizeButton: HTMLButtonElement;
  readonly updatePseudoButton: HTMLButtonElement;
  readonly updateCodeButton: HTMLButtonElement;
  readonly zoomPopup: HTMLElement;
  readonly expandButton: HTMLButtonElement;
  readonly collapseButton: HTMLButtonElement;
  readonly modal: HTMLElement;
  readonly modalBody: HTMLElement;
  readonly confirmButton: HTMLButtonElement;
  readonly rejectButton: HTMLButtonElement;
  readonly outline: HTMLElement;

  private confirmInFlight = false;

  constructor(readonly root: HTMLElement, readonly api: ServiceApi) {
    root.innerHTML = `
      <header class="topbar">
        <input class="path-input" placeholder="path to a source file" />
        <button class="open-btn">Open</button>
        <span class="session-label"></span>
      </header>
      <div class="banner hidden"></div>
      <main class="panes">
        <section class="pane left">
          <h2>Pseudocode</h2>
          <div class="editor">
            <div class="gutter"></div>
            <textarea class="pseudo" spellcheck="false"
              placeholder="No pseudocode yet. Open a file and press Update Pseudocode, or write a GOAL/STEPS document here."></textarea>
          </div>
        </section>
        <section class="pane right">
          <h2 class="source-title">Source</h2>
          <pre class="source" tabindex="0"></pre>
        </section>
      </main>
      <footer class="actions">
        <button class="visualize-btn">Visualize Pseudocode</button>
        <button class="update-pseudo-btn">Update Pseudocode</button>
        <button class="update-code-btn">Update Code</button>
      </footer>
      <div class="zoom-popup hidden">
        <button class="expand-btn">Expand</button>
        <button class="collapse-btn">Collapse</button>
      </div>
      <div class="modal hidden">
        <div class="modal-card">
          <h3>Proposed source change</h3>
          <div class="modal-body"></div>
          <div class="modal-actions">
            <button class="confirm-btn">Confirm</button>
            <button class="reject-btn">Reject</button>
          </div>
        </div>
      </div>
      <div class="outline hidden"></div>
    `;
    const q = <T extends Element>(sel: string) => root.querySelector(sel) as T;
    this.pathInput = q(".path-input");
    this.openButton = q(".open-btn");
    this.banner = q(".banner");
    this.gutter = q(".gutter");
    this.pseudoPane = q(".pseudo");
    this.sourcePane = q(".source");
    this.sourceTitle = q(".source-title");
    this.visualizeButton = q(".visualize-btn");
    this.updatePseudoButton = q(".update-pseudo-btn");
    this.updateCodeButton = q(".update-code-btn");
    this.zoomPopup = q(".zoom-popup");
    this.expandButton = q(".expand-btn");
    this.collapseButton = q(".collapse-btn");
    this.modal = q(".modal");
    this.modalBody = q(".modal-body");
    this.confirmButton = q(".confirm-btn");
    this.rejectButton = q(".reject-btn");
    this.outline = q(".outline");

    this.openButton.addEventListener("click", () => void this.openPath());
    this.updatePseudoButton.addEventListener("click", () => void this.updatePseudocode());
    this.updateCodeButton.addEventListener("click", () => void this.updateCode());
    this.visualizeButton.addEventListener("click", () => this.toggleOutline());
    this.expandButton.addEventListener("click", () => void this.zoomSelection("expand"));
    this.collapseButton.addEventListener("click", () => void this.zoomSelection("collapse"));
    this.confirmButton.addEventListener("click", () => void this.confirmPreview());
    this.rejectButton.addEventListener("click", () => void this.rejectPreview());
    for (const eventName of ["mouseup", "keyup", "select"]) {
      this.pseudoPane.addEventListener(eventName, () => this.refreshZoomPopup());
    }
    this.sync();
  }

  // -- state/view sync -----------------------------------------------------

  private sync(): void {
    const { view, busy, connected, error } = this.state;
    const label = this.root.querySelector(".session-label") as HTMLElement;
    label.textContent = this.state.sessionId ? `session ${this.state.sessionId}` : "";

    if (error) {
      this.banner.textContent = error;
      this.banner.classList.remove("hidden");
    } else {
      this.banner.textContent = "";
      this.banner.classList.add("hidden");
    }

    this.sourcePane.textContent = view ? view.source_text : "";
    this.sourceTitle.textContent = view ? `Source — ${view.source_path}` : "Source";

    const disabled = busy || !connected || !this.state.sessionId;
    for (const button of [this.visualizeButton, this.updatePseudoButton,
                          this.updateCodeButton]) {
      button.disabled = disabled;
    }
    this.confirmButton.disabled = busy && !this.confirmInFlight;
    this.rejectButton.disabled = busy && !this.confirmInFlight;
    this.renderGutter();
  }

  private renderGutter(): void {
    const text = this.pseudoPane.value;
    const count = text ? text.split("\n").length - (text.endsWith("\n") ? 1 : 0) : 0;
    this.gutter.innerHTML = "";
    for (let line = 1; line <= count; line++) {
      const cell = document.createElement("span");
      cell.textContent = String(line);
      cell.className = "line-no";
      const changed = this.state.changedRange;
      if (changed && line >= changed.start && line <= changed.end) {
        cell.classList.add("changed");
      }
      if (this.state.parseErrorLine === line) {
        cell.classList.add("error-line");
      }
      this.gutter.appendChild(cell);
    }
  }

  private setError(message: string | null): void {
    this.state.error = message;
    this.sync();
  }

  private async mutate<T>(work: () => Promise<T>): Promise<T | undefined> {
    if (this.state.busy) {
      return undefined;
    }
    this.state.busy = true;
    this.state.error = null;
    this.sync();
    try {
      const result = await work();
      this.state.connected = true;
      return result;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.connected = err.status !== 0;
        this.setError(err.status === 0
          ? "Cannot reach the service. Is it running?"
          : `${err.kind}: ${err.message}`);
      } else {
        this.setError(String(err));
      }
      return undefined;
    } finally {
      this.state.busy = false;
      this.sync();
    }
  }

  private showView(view: SessionView): void {
    this.state.view = view;
    this.state.sessionId = view.session_id;
    if (view.program) {
      this.pseudoPane.value = view.program.text;
    }
    if (view.changed_range) {
      this.state.changedRange = view.changed_range;
    }
    if (view.pending_preview && view.pending_preview.status === "pending") {
      this.openModal(view);
    }
    this.sync();
  }

  // -- actions ---------------------------------------------------------------

  async openPath(): Promise<void> {
    const path = this.pathInput.value.trim();
    if (!path) {
      return;
    }
    await this.mutate(async () => {
      const { session_id } = await this.api.createSession(path);
      await this.loadSession(session_id);
    });
  }

  async loadSession(id: string): Promise<void> {
    const view = await this.api.getSession(id);
    this.state.changedRange = null;
    this.state.parseErrorLine = null;
    this.showView(view);
  }

  async updatePseudocode(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) {
      return;
    }
    await this.mutate(async () => {
      const view = await this.api.translate(id, "to_pseudo");
      this.state.changedRange = null;
      this.state.parseErrorLine = null;
      this.showView(view);
    });
  }

  /** Save the left pane, then propagate: edits go through apply, a document
   * with no registered edits is regenerated wholesale. */
  async updateCode(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) {
      return;
    }
    await this.mutate(async () => {
      this.state.parseErrorLine = null;
      try {
        await this.api.putPseudocode(id, this.pseudoPane.value);
      } catch (err) {
        if (err instanceof ApiError && err.kind === "parse-error") {
          this.state.parseErrorLine = err.location?.line ?? null;
        }
        throw err;
      }
      let view: SessionView;
      try {
        view = await this.api.apply(id);
      } catch (err) {
        if (err instanceof ApiError && err.status === 409
            && err.message.includes("no pseudocode edits")) {
          view = await this.api.translate(id, "to_code");
        } else {
          throw err;
        }
      }
      this.showView(view);
    });
  }

  // -- zoom ---------------------------------------------------------------

  currentSelection(): { start: number; end: number } | null {
    const view = this.state.view;
    if (!view || !view.program) {
      return null;
    }
    const span = selectionToLines(this.pseudoPane.value,
                                  this.pseudoPane.selectionStart,
                                  this.pseudoPane.selectionEnd);
    if (!span) {
      return null;
    }
    return zoomableSpan(span, view.program.line_kinds as LineKind[]);
  }

  refreshZoomPopup(): void {
    const span = this.state.busy ? null : this.currentSelection();
    this.zoomPopup.classList.toggle("hidden", span === null);
  }

  async zoomSelection(op: "expand" | "collapse"): Promise<void> {
    const id = this.state.sessionId;
    const span = this.currentSelection();
    if (!id || !span) {
      return;
    }
    this.zoomPopup.classList.add("hidden");
    const scrollTop = this.pseudoPane.scrollTop;
    await this.mutate(async () => {
      const view = await this.api.zoom(id, op, span.start, span.end);
      this.showView(view);
      this.pseudoPane.scrollTop = scrollTop;
    });
  }

  // -- diff preview modal ----------------------------------------------------

  openModal(view: SessionView): void {
    const preview = view.pending_preview;
    if (!preview) {
      return;
    }
    this.modalBody.innerHTML = "";
    if (preview.hunks.length === 0) {
      const none = document.createElement("p");
      none.className = "no-changes";
      none.textContent = "No changes: the proposed source is identical.";
      this.modalBody.appendChild(none);
    }
    for (const hunk of preview.hunks) {
      const row = document.createElement("div");
      row.className = "hunk";
      const oldSide = document.createElement("pre");
      oldSide.className = "hunk-old";
      oldSide.textContent = hunk.old_lines.join("\n");
      const newSide = document.createElement("pre");
      newSide.className = "hunk-new";
      newSide.textContent = hunk.new_lines.join("\n");
      const where = document.createElement("div");
      where.className = "hunk-where";
      where.textContent = `@ old line ${hunk.old_start}`;
      row.append(where, oldSide, newSide);
      this.modalBody.appendChild(row);
    }
    this.modal.classList.remove("hidden");
  }

  closeModal(): void {
    this.modal.classList.add("hidden");
  }

  async confirmPreview(): Promise<void> {
    const id = this.state.sessionId;
    if (!id || this.confirmInFlight) {
      return;
    }
    this.confirmInFlight = true;
    this.confirmButton.disabled = true;
    try {
      await this.mutate(async () => {
        const view = await this.api.confirm(id);
        this.closeModal();
        this.showView(view);
      });
    } finally {
      this.confirmInFlight = false;
      this.confirmButton.disabled = false;
    }
  }

  async rejectPreview(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) {
      return;
    }
    await this.mutate(async () => {
      const view = await this.api.reject(id);
      this.closeModal();
      this.showView(view);
    });
  }

  // -- outline (Visualize Pseudocode) ---------------------------------------

  toggleOutline(): void {
    if (!this.outline.classList.contains("hidden")) {
      this.outline.classList.add("hidden");
      return;
    }
    const view = this.state.view;
    if (!view || !view.program) {
      return;
    }
    this.outline.innerHTML = "";
    this.outline.appendChild(
      buildOutline(view.program.text, view.program.line_kinds as LineKind[]));
    this.outline.classList.remove("hidden");
  }
}

/** Indentation-based outline with collapsible block markers. */
export function buildOutline(text: string, kinds: LineKind[]): HTMLElement {
  const lines = text.split("\n").slice(0, kinds.length);
  const rootElement = document.createElement("div");
  rootElement.className = "outline-tree";
  const stack: HTMLElement[] = [rootElement];
  const top = () => stack[stack.length - 1];
  lines.forEach((line, index) => {
    const kind = kinds[index];
    const content = line.trim();
    if (kind === "block-open" || kind === "elif-open" || kind === "else-open") {
      const details = document.createElement("details");
      details.open = true;
      const summary = document.createElement("summary");
      summary.textContent = content;
      details.appendChild(summary);
      top().appendChild(details);
      stack.push(details);
    } else if (kind === "block-close") {
      if (stack.length > 1) {
        stack.pop();
      }
    } else {
      const row = document.createElement("div");
      row.className = kind === "simple" ? "outline-step" : "outline-header";
      row.textContent = content;
      top().appendChild(row);
    }
  });
  return rootElement;
}

export function createApp(root: HTMLElement, api: ServiceApi): App {
  return new App(root, api);
}
