import type {
  Analysis,
  ErrorBody,
  GraphJson,
  MoveReply,
  SessionSnapshot,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public reason: string,
  ) {
    super(`${code}: ${reason}`);
  }
}

async function unwrap<T>(res: Response): Promise<T> {
  if (res.ok) return (await res.json()) as T;
  let body: ErrorBody;
  try {
    body = (await res.json()) as ErrorBody;
  } catch {
    body = { error: "unknown", reason: res.statusText };
  }
  throw new ApiError(res.status, body.error, body.reason);
}

export interface CreateSessionRequest {
  left: string | GraphJson;
  right: string | GraphJson;
  rounds: number;
  engine: "minimax" | "lm-key";
  human?: "spoiler" | "duplicator";
  seed?: number;
}

/** Thin typed wrapper over the HTTP API; the single base-URL setting is
 * the only configuration. */
export class ApiClient {
  constructor(private baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  createSession(req: CreateSessionRequest): Promise<SessionSnapshot> {
    return fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    }).then((r) => unwrap<SessionSnapshot>(r));
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return fetch(this.url(`/sessions/${id}`)).then((r) =>
      unwrap<SessionSnapshot>(r),
    );
  }

  move(
    id: string,
    side: "left" | "right",
    vertex: number,
    index?: number,
  ): Promise<MoveReply> {
    return fetch(this.url(`/sessions/${id}/move`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ side, vertex, index }),
    }).then((r) => unwrap<MoveReply>(r));
  }

  analysis(id: string): Promise<Analysis> {
    return fetch(this.url(`/sessions/${id}/analysis`)).then((r) =>
      unwrap<Analysis>(r),
    );
  }

  hn(n: number): Promise<GraphJson> {
    return fetch(this.url(`/graphs/hn/${n}`)).then((r) =>
      unwrap<GraphJson>(r),
    );
  }
}
