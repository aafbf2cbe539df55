// UI contract tests against a stub service: no real backend anywhere.

import { beforeEach, describe, expect, it } from "vitest";

import { ApiError, ServiceApi, SessionView } from "../src/api.js";
import { createApp } from "../src/app.js";
import { buildOutline } from "../src/app.js";
import { selectionToLines, zoomableSpan } from "../src/selection.js";

const PROGRAM_TEXT = [
  "GOAL: Run the demo;",
  "STEPS:",
  "First step;",
  "if (Flag is set;) {",
  "  Inner step;",
  "}",
  "Last step;",
  "",
].join("\n");

const LINE_KINDS = [
  "goal-header", "steps-header", "simple", "block-open", "simple",
  "block-close", "simple",
] as const;

function sessionView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    session_id: "s1",
    source_path: "demo.py",
    source_text: "print('demo')\n",
    content_hash: "abc",
    program: {
      text: PROGRAM_TEXT,
      interchange: {},
      line_count: 7,
      line_kinds: [...LINE_KINDS],
      warnings: [],
    },
    pending_preview: null,
    pending_edits: [],
    history_length: 1,
    ...overrides,
  };
}

interface Recorded {
  method: string;
  url: string;
  body: unknown;
}

type Responder = (call: Recorded) => { status?: number; body: unknown } | undefined;

function stubApi(responder: Responder): { api: ServiceApi; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const call: Recorded = {
      method: init?.method ?? "GET",
      url,
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    };
    calls.push(call);
    const routed = responder(call);
    if (!routed) {
      throw new Error(`unstubbed request: ${call.method} ${call.url}`);
    }
    return new Response(JSON.stringify(routed.body), {
      status: routed.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };
  return { api: new ServiceApi("", fetchFn), calls };
}

function mount(): HTMLElement {
  document.body.innerHTML = "<div id='app'></div>";
  return document.getElementById("app") as HTMLElement;
}

function lineOffsets(text: string, startLine: number, endLine: number) {
  const lines = text.split("\n");
  const offsetOf = (line: number) =>
    lines.slice(0, line - 1).join("\n").length + (line > 1 ? 1 : 0);
  return {
    start: offsetOf(startLine),
    end: offsetOf(endLine) + lines[endLine - 1].length,
  };
}

describe("dual pane", () => {
  it("renders pseudocode, read-only source, and the three actions", async () => {
    const { api } = stubApi(({ url }) =>
      url === "/sessions/s1" ? { body: sessionView() } : undefined);
    const app = createApp(mount(), api);
    await app.loadSession("s1");

    expect(app.pseudoPane.value).toBe(PROGRAM_TEXT);
    expect(app.sourcePane.textContent).toBe("print('demo')\n");
    expect(app.sourcePane.tagName).toBe("PRE");
    expect(app.visualizeButton.textContent).toBe("Visualize Pseudocode");
    expect(app.updatePseudoButton.textContent).toBe("Update Pseudocode");
    expect(app.updateCodeButton.textContent).toBe("Update Code");
    expect(app.updateCodeButton.disabled).toBe(false);
    expect(app.gutter.querySelectorAll(".line-no")).toHaveLength(7);
  });

  it("shows an empty-state prompt before any pseudocode exists", async () => {
    const { api } = stubApi(({ url }) =>
      url === "/sessions/s1" ? { body: sessionView({ program: null }) } : undefined);
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    expect(app.pseudoPane.value).toBe("");
    expect(app.pseudoPane.placeholder).toContain("No pseudocode yet");
  });

  it("disables the actions and shows a banner when the service is down", async () => {
    const api = new ServiceApi("", async () => {
      throw new Error("connection refused");
    });
    const app = createApp(mount(), api);
    app.state.sessionId = "s1";
    await app.updatePseudocode();
    expect(app.banner.classList.contains("hidden")).toBe(false);
    expect(app.banner.textContent).toContain("Cannot reach the service");
    expect(app.updateCodeButton.disabled).toBe(true);
    expect(app.updatePseudoButton.disabled).toBe(true);
  });
});

describe("selection zoom popup", () => {
  async function appWithSelection(startLine: number, endLine: number) {
    const { api, calls } = stubApi(({ url, method }) => {
      if (url === "/sessions/s1") return { body: sessionView() };
      if (url === "/sessions/s1/zoom" && method === "POST") {
        return { body: sessionView({ changed_range: { start: 3, end: 5 }, used_cache: false }) };
      }
      return undefined;
    });
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    const { start, end } = lineOffsets(PROGRAM_TEXT, startLine, endLine);
    app.pseudoPane.selectionStart = start;
    app.pseudoPane.selectionEnd = end;
    app.refreshZoomPopup();
    return { app, calls };
  }

  it("issues the zoom request for a one-line selection", async () => {
    const { app, calls } = await appWithSelection(3, 3);
    expect(app.zoomPopup.classList.contains("hidden")).toBe(false);
    await app.zoomSelection("expand");
    const zoomCalls = calls.filter((c) => c.url.endsWith("/zoom"));
    expect(zoomCalls).toHaveLength(1);
    expect(zoomCalls[0].method).toBe("POST");
    expect(zoomCalls[0].body).toEqual({ op: "expand", start: 3, end: 3 });
  });

  it("issues the zoom request for a multi-line selection", async () => {
    const { app, calls } = await appWithSelection(4, 6);
    await app.zoomSelection("collapse");
    const zoomCalls = calls.filter((c) => c.url.endsWith("/zoom"));
    expect(zoomCalls).toHaveLength(1);
    expect(zoomCalls[0].body).toEqual({ op: "collapse", start: 4, end: 6 });
  });

  it("stays hidden for header-only selections", async () => {
    const { app, calls } = await appWithSelection(1, 2);
    expect(app.zoomPopup.classList.contains("hidden")).toBe(true);
    await app.zoomSelection("expand");
    expect(calls.filter((c) => c.url.endsWith("/zoom"))).toHaveLength(0);
  });

  it("highlights the changed region after a zoom", async () => {
    const { app } = await appWithSelection(3, 3);
    await app.zoomSelection("expand");
    const changed = app.gutter.querySelectorAll(".line-no.changed");
    expect(changed).toHaveLength(3); // service reported lines 3-5
    expect(changed[0].textContent).toBe("3");
  });
});

describe("diff confirm flow", () => {
  function previewView(): SessionView {
    return sessionView({
      pending_preview: {
        status: "pending",
        new_source_text: "print('changed')\n",
        hunks: [{ old_start: 1, old_lines: ["print('demo')"],
                  new_start: 1, new_lines: ["print('changed')"] }],
        unified: "--- demo.py\n+++ demo.py\n",
      },
    });
  }

  it("opens the modal with side-by-side hunks and confirms exactly once", async () => {
    let confirms = 0;
    const { api, calls } = stubApi(({ url, method }) => {
      if (url === "/sessions/s1") return { body: previewView() };
      if (url.endsWith("/preview/confirm") && method === "POST") {
        confirms += 1;
        return { body: sessionView({ source_text: "print('changed')\n" }) };
      }
      return undefined;
    });
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    expect(app.modal.classList.contains("hidden")).toBe(false);
    expect(app.modalBody.querySelectorAll(".hunk")).toHaveLength(1);
    expect(app.modalBody.querySelector(".hunk-old")?.textContent).toBe("print('demo')");
    expect(app.modalBody.querySelector(".hunk-new")?.textContent).toBe("print('changed')");

    await Promise.all([app.confirmPreview(), app.confirmPreview()]);
    expect(confirms).toBe(1);
    expect(calls.filter((c) => c.url.endsWith("/preview/confirm"))).toHaveLength(1);
    expect(app.modal.classList.contains("hidden")).toBe(true);
    expect(app.sourcePane.textContent).toBe("print('changed')\n");
  });

  it("reject closes the modal and leaves the source pane untouched", async () => {
    const { api } = stubApi(({ url, method }) => {
      if (url === "/sessions/s1") return { body: previewView() };
      if (url.endsWith("/preview/reject") && method === "POST") {
        return { body: sessionView() };
      }
      return undefined;
    });
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    await app.rejectPreview();
    expect(app.modal.classList.contains("hidden")).toBe(true);
    expect(app.sourcePane.textContent).toBe("print('demo')\n");
  });

  it("shows a no-change note for an empty preview", async () => {
    const view = sessionView({
      pending_preview: { status: "pending", new_source_text: "print('demo')\n",
                         hunks: [], unified: "" },
    });
    const { api } = stubApi(({ url }) =>
      url === "/sessions/s1" ? { body: view } : undefined);
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    expect(app.modalBody.querySelector(".no-changes")?.textContent)
      .toContain("No changes");
  });
});

describe("update code validation", () => {
  it("renders parse errors from the service at the reported line", async () => {
    const { api } = stubApi(({ url, method }) => {
      if (url === "/sessions/s1") return { body: sessionView() };
      if (url.endsWith("/pseudocode") && method === "PUT") {
        return {
          status: 422,
          body: { error_kind: "parse-error",
                  message: "line 5, column 3: expected ';' after the statement",
                  location: { line: 5, column: 3 } },
        };
      }
      return undefined;
    });
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    app.pseudoPane.value = PROGRAM_TEXT.replace("  Inner step;", "  Inner step");
    await app.updateCode();
    expect(app.state.parseErrorLine).toBe(5);
    const marked = app.gutter.querySelectorAll(".line-no.error-line");
    expect(marked).toHaveLength(1);
    expect(marked[0].textContent).toBe("5");
    expect(app.banner.textContent).toContain("line 5, column 3");
  });

  it("applies validated edits and opens the preview modal", async () => {
    const { api, calls } = stubApi(({ url, method }) => {
      if (url === "/sessions/s1") return { body: sessionView() };
      if (url.endsWith("/pseudocode") && method === "PUT") {
        return { body: { edit_ops: [], canonical_text: PROGRAM_TEXT, warnings: [] } };
      }
      if (url.endsWith("/apply") && method === "POST") {
        return { body: sessionView({
          pending_preview: { status: "pending", new_source_text: "x\n",
                             hunks: [], unified: "" } }) };
      }
      return undefined;
    });
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    await app.updateCode();
    expect(calls.map((c) => c.method + " " + c.url)).toEqual([
      "GET /sessions/s1",
      "PUT /sessions/s1/pseudocode",
      "POST /sessions/s1/apply",
    ]);
    expect(app.modal.classList.contains("hidden")).toBe(false);
  });

  it("falls back to regeneration when there are no registered edits", async () => {
    const { api, calls } = stubApi(({ url, method }) => {
      if (url === "/sessions/s1") return { body: sessionView() };
      if (url.endsWith("/pseudocode") && method === "PUT") {
        return { body: { edit_ops: [], canonical_text: PROGRAM_TEXT, warnings: [] } };
      }
      if (url.endsWith("/apply")) {
        return { status: 409, body: { error_kind: "invalid-state",
                                      message: "no pseudocode edits since the last apply" } };
      }
      if (url.endsWith("/translate")) {
        return { body: sessionView({
          pending_preview: { status: "pending", new_source_text: "new\n",
                             hunks: [], unified: "" } }) };
      }
      return undefined;
    });
    const app = createApp(mount(), api);
    await app.loadSession("s1");
    await app.updateCode();
    const translate = calls.find((c) => c.url.endsWith("/translate"));
    expect(translate?.body).toEqual({ direction: "to_code" });
  });
});

describe("selection helpers", () => {
  it("maps character offsets to line spans", () => {
    const text = "ab\ncd\nef\n";
    expect(selectionToLines(text, 0, 2)).toEqual({ start: 1, end: 1 });
    expect(selectionToLines(text, 0, 3)).toEqual({ start: 1, end: 1 });
    expect(selectionToLines(text, 1, 7)).toEqual({ start: 1, end: 3 });
    expect(selectionToLines(text, 3, 6)).toEqual({ start: 2, end: 2 });
    expect(selectionToLines(text, 4, 4)).toBeNull();
  });

  it("rejects header-only selections", () => {
    const kinds = [...LINE_KINDS];
    expect(zoomableSpan({ start: 1, end: 2 }, kinds)).toBeNull();
    expect(zoomableSpan({ start: 2, end: 3 }, kinds)).toEqual({ start: 2, end: 3 });
  });
});

describe("outline", () => {
  it("nests blocks as collapsible markers", () => {
    const tree = buildOutline(PROGRAM_TEXT, [...LINE_KINDS]);
    const details = tree.querySelectorAll("details");
    expect(details).toHaveLength(1);
    expect(details[0].querySelector("summary")?.textContent).toBe("if (Flag is set;) {");
    expect(details[0].querySelectorAll(".outline-step")).toHaveLength(1);
    expect(tree.querySelectorAll(".outline-step")).toHaveLength(3);
  });
});
