// Thin client for the studio service. All robot access goes through this
// HTTP/WebSocket surface; the frontend never touches wire frames directly.

export interface SessionInfo {
  session: string;
  name: string;
  blocks: number;
  duration_ms: number;
  started_at_ms: number;
}

export interface StatusInfo {
  status: string;
  clock_ms: number;
  clock_mode: string;
  tick_ms: number;
  session: string | null;
  kernel_backend: string;
}

export interface TelemetryEvent {
  t_ms: number;
  angles: number[];
  status: string;
}

export interface RemoteValidation {
  kind: "report" | "parse_error";
  ok: boolean;
  violations: { code: string; message: string }[];
  message?: string;
}

export interface PatternRecord {
  id: string;
  title: string;
  intent: string;
  trigger: string;
  behaviors: string[];
  affect: string;
  summary: string;
  suggested_presets: string[];
  note?: string;
}

export interface CardSection {
  heading: string;
  items: string[];
}

export interface CardRecord {
  id: string;
  module: string;
  species: string | null;
  title: string;
  sections: CardSection[];
}

export interface PatternFilter {
  intent?: string;
  trigger?: string;
  behavior?: string;
  affect?: string;
  limit?: number;
  offset?: number;
}

export class ApiError extends Error {
  constructor(public status: number, public body: unknown, message: string) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export interface WebSocketLike {
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  close(): void;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export interface TelemetryHandle {
  close(): void;
  done: Promise<void>;
}

export class StudioClient {
  private fetchImpl: FetchLike;
  private wsFactory: WebSocketFactory;

  constructor(
    public base: string,
    opts: { fetchImpl?: FetchLike; wsFactory?: WebSocketFactory } = {},
  ) {
    this.fetchImpl = opts.fetchImpl ?? fetch.bind(globalThis);
    this.wsFactory = opts.wsFactory ?? ((url) => new WebSocket(url) as unknown as WebSocketLike);
  }

  private async getJson(path: string): Promise<unknown> {
    const resp = await this.fetchImpl(`${this.base}${path}`);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body, (body as { message?: string }).message ?? resp.statusText);
    }
    return body;
  }

  private async postJson(path: string, payload: unknown): Promise<unknown> {
    const resp = await this.fetchImpl(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body, (body as { message?: string }).message ?? resp.statusText);
    }
    return body;
  }

  status(): Promise<StatusInfo> {
    return this.getJson("/status") as Promise<StatusInfo>;
  }

  async presetNames(): Promise<string[]> {
    const body = (await this.getJson("/presets")) as { presets: { name: string }[] };
    return body.presets.map((p) => p.name);
  }

  /** Raw canonical text of a bundled preset. */
  async presetText(name: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.base}/presets/${encodeURIComponent(name)}`);
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({}));
      throw new ApiError(resp.status, body, `no preset ${name}`);
    }
    return resp.text();
  }

  /** Server-side validation of raw document text. */
  async validateRemote(text: string): Promise<RemoteValidation> {
    const resp = await this.fetchImpl(`${this.base}/validate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: text,
    });
    const body = (await resp.json()) as Record<string, unknown>;
    if (resp.status === 400) {
      return { kind: "parse_error", ok: false, violations: [], message: String(body.message ?? "") };
    }
    if (!resp.ok) throw new ApiError(resp.status, body, String(body.message ?? resp.statusText));
    return {
      kind: "report",
      ok: Boolean(body.ok),
      violations: (body.violations as { code: string; message: string }[]) ?? [],
    };
  }

  /**
   * Start playback of raw document text. The caller hands over exact bytes;
   * this method never re-serializes, so what was exported is what plays.
   */
  playDocument(text: string, replace = false): Promise<SessionInfo> {
    return this.postJson("/play", { document: text, ...(replace ? { replace: true } : {}) }) as Promise<SessionInfo>;
  }

  playPreset(name: string, replace = false): Promise<SessionInfo> {
    return this.postJson("/play", { preset: name, ...(replace ? { replace: true } : {}) }) as Promise<SessionInfo>;
  }

  stop(session?: string): Promise<{ status: string; session: string | null; t_ms?: number }> {
    return this.postJson("/stop", session ? { session } : undefined) as Promise<{
      status: string; session: string | null; t_ms?: number;
    }>;
  }

  async patterns(filter: PatternFilter = {}): Promise<{ total: number; patterns: PatternRecord[] }> {
    const params = new URLSearchParams();
    for (const [k, v] of Object.entries(filter)) {
      if (v !== undefined) params.set(k, String(v));
    }
    const qs = params.toString();
    return (await this.getJson(`/patterns${qs ? "?" + qs : ""}`)) as {
      total: number; patterns: PatternRecord[];
    };
  }

  async cards(): Promise<CardRecord[]> {
    const body = (await this.getJson("/cards")) as { cards: CardRecord[] };
    return body.cards;
  }

  stats(): Promise<{ total: number; dimensions: Record<string, { category: string; count: number; percent: number }[]> }> {
    return this.getJson("/stats") as Promise<{
      total: number;
      dimensions: Record<string, { category: string; count: number; percent: number }[]>;
    }>;
  }

  /**
   * Subscribe to a session's telemetry. Events arrive in order; the handle
   * resolves `done` when the server closes the stream.
   */
  telemetry(session: string, onEvent: (ev: TelemetryEvent) => void): TelemetryHandle {
    const wsUrl = this.base.replace(/^http/, "ws") + `/telemetry?session=${encodeURIComponent(session)}`;
    const ws = this.wsFactory(wsUrl);
    let settle: () => void;
    const done = new Promise<void>((resolve) => {
      settle = resolve;
    });
    ws.onmessage = (ev) => {
      const parsed = JSON.parse(String(ev.data)) as TelemetryEvent | { error: string };
      if ("error" in parsed) {
        ws.close();
        return;
      }
      onEvent(parsed);
    };
    ws.onclose = () => settle();
    ws.onerror = () => settle();
    return { close: () => ws.close(), done };
  }
}
