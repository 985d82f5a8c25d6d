/** Typed client for the matchdex read-only HTTP API. */

import type {
  ApiErrorBody,
  MatchIndexJson,
  MatchSummary,
  RallyRecordJson,
  TagName,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function asJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let body: ApiErrorBody = { error: `http_${res.status}`, detail: res.statusText };
    try {
      body = (await res.json()) as ApiErrorBody;
    } catch {
      // non-JSON error body; keep the synthetic one
    }
    throw new ApiError(res.status, body.error, body.detail);
  }
  return (await res.json()) as T;
}

export class MatchdexApi {
  constructor(public baseUrl: string = "") {}

  matches(): Promise<MatchSummary[]> {
    return fetch(`${this.baseUrl}/api/matches`).then((r) => asJson(r));
  }

  match(id: string): Promise<MatchIndexJson> {
    return fetch(`${this.baseUrl}/api/matches/${encodeURIComponent(id)}`).then(
      (r) => asJson(r),
    );
  }

  segments(id: string, tag?: TagName): Promise<RallyRecordJson[]> {
    const query = tag ? `?tag=${encodeURIComponent(tag)}` : "";
    return fetch(
      `${this.baseUrl}/api/matches/${encodeURIComponent(id)}/segments${query}`,
    ).then((r) => asJson(r));
  }

  point(
    id: string,
    setNo: number,
    gameNo: number,
    pointNo: number,
  ): Promise<RallyRecordJson[]> {
    return fetch(
      `${this.baseUrl}/api/matches/${encodeURIComponent(id)}/points/${setNo}/${gameNo}/${pointNo}`,
    ).then((r) => asJson(r));
  }

  health(): Promise<{ status: string }> {
    return fetch(`${this.baseUrl}/healthz`).then((r) => asJson(r));
  }
}
