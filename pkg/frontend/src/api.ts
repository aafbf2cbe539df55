// Typed client for the local editing service. All mutations of the source
// file go through these endpoints; the UI itself never touches source text.

export type LineKind =
  | "goal-header"
  | "steps-header"
  | "simple"
  | "block-open"
  | "elif-open"
  | "else-open"
  | "block-close";

export interface ProgramView {
  text: string;
  interchange: unknown;
  line_count: number;
  line_kinds: LineKind[];
  warnings: string[];
}

export interface Hunk {
  old_start: number;
  old_lines: string[];
  new_start: number;
  new_lines: string[];
}

export interface PreviewView {
  status: "pending" | "confirmed" | "rejected";
  new_source_text: string;
  hunks: Hunk[];
  unified: string;
}

export interface SessionView {
  session_id: string;
  source_path: string;
  source_text: string;
  content_hash: string;
  program: ProgramView | null;
  pending_preview: PreviewView | null;
  pending_edits: unknown[];
  history_length: number;
  changed_range?: { start: number; end: number };
  used_cache?: boolean;
  attempts?: number;
}

export interface EditOpView {
  kind: "addition" | "deletion" | "replacement";
  range: { start: number; end: number };
  context_before: string[];
  old_block: string[];
  new_block: string[];
}

export interface PutResult {
  edit_ops: EditOpView[];
  canonical_text: string;
  warnings: string[];
}

export interface ErrorLocation {
  line?: number;
  column?: number;
  path?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    message: string,
    readonly location?: ErrorLocation,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? {} : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "connection", `cannot reach the service: ${err}`);
    }
    if (!response.ok) {
      let kind = `http-${response.status}`;
      let message = response.statusText;
      let location: ErrorLocation | undefined;
      try {
        const payload = await response.json();
        kind = payload.error_kind ?? kind;
        message = payload.message ?? message;
        location = payload.location;
      } catch {
        // non-JSON error body; keep the defaults
      }
      throw new ApiError(response.status, kind, message, location);
    }
    return (await response.json()) as T;
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("GET", "/sessions");
  }

  createSession(sourcePath: string): Promise<{ session_id: string }> {
    return this.request("POST", "/sessions", { source_path: sourcePath });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  translate(id: string, direction: "to_pseudo" | "to_code"): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/translate`, { direction });
  }

  zoom(id: string, op: "expand" | "collapse", start: number, end: number): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/zoom`, { op, start, end });
  }

  putPseudocode(id: string, text: string): Promise<PutResult> {
    return this.request("PUT", `/sessions/${id}/pseudocode`, { text });
  }

  apply(id: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/apply`);
  }

  confirm(id: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/preview/confirm`);
  }

  reject(id: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/preview/reject`);
  }
}
