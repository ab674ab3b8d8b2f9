import type {
  AdvanceResponse,
  ControlMsg,
  ScoreReport,
  Snapshot,
  TrajectorySample,
  Visibility,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    public readonly reason: string,
  ) {
    super(`${code}: ${reason}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  const body = await res.json().catch(() => null);
  if (!res.ok) {
    const code = body && body.code ? body.code : `http_${res.status}`;
    const reason = body && body.reason ? body.reason : res.statusText;
    throw new ApiError(res.status, code, reason);
  }
  return body as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class TrainerApi {
  constructor(public readonly base: string = "") {}

  async createSession(
    config: Record<string, unknown>,
    visibility: Visibility,
  ): Promise<string> {
    const out = await request<{ id: string }>(
      `${this.base}/sessions`,
      post({ config, visibility }),
    );
    return out.id;
  }

  state(id: string): Promise<Snapshot> {
    return request(`${this.base}/sessions/${id}/state`);
  }

  advance(
    id: string,
    duration: number,
    controls: ControlMsg[],
  ): Promise<AdvanceResponse> {
    return request(
      `${this.base}/sessions/${id}/advance`,
      post({ duration, controls }),
    );
  }

  trajectory(id: string): Promise<{ samples: TrajectorySample[] }> {
    return request(`${this.base}/sessions/${id}/trajectory`);
  }

  finish(id: string): Promise<Snapshot> {
    return request(`${this.base}/sessions/${id}/finish`, post({}));
  }

  score(id: string): Promise<ScoreReport> {
    return request(`${this.base}/sessions/${id}/score`);
  }
}
