// Thin typed client over the session API. Errors carry the server's
// flavor-specific reason verbatim so the UI can surface it unchanged.

import type {
  AnalysisView,
  ApiErrorBody,
  MovePage,
  MovePayload,
  StateView,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public code: string, public reason: string) {
    super(reason);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let code = "HttpError";
    let reason = `${response.status}`;
    try {
      const body = (await response.json()) as ApiErrorBody;
      code = body.error.code;
      reason = body.error.reason;
    } catch {
      // non-JSON error body; keep the defaults
    }
    throw new ApiError(response.status, code, reason);
  }
  return (await response.json()) as T;
}

export function createGame(instance: unknown, config: unknown,
                           engineRole: string | null): Promise<StateView> {
  return request<StateView>("/games", {
    method: "POST",
    body: JSON.stringify({ instance, config, engine_role: engineRole }),
  });
}

export function getState(id: string, page = 0): Promise<StateView> {
  return request<StateView>(`/games/${id}?page=${page}`);
}

export function listMoves(id: string, kind: "classical" | "quantum",
                          page = 0, pageSize = 50): Promise<MovePage> {
  return request<MovePage>(
    `/games/${id}/moves?kind=${kind}&page=${page}&page_size=${pageSize}`);
}

export function postMove(id: string, move: MovePayload): Promise<StateView> {
  return request<StateView>(`/games/${id}/move`, {
    method: "POST",
    body: JSON.stringify(move),
  });
}

export function undo(id: string): Promise<StateView> {
  return request<StateView>(`/games/${id}/undo`, { method: "POST" });
}

export function analyze(id: string, maxNodes = 2_000_000,
                        maxSeconds = 10): Promise<AnalysisView> {
  return request<AnalysisView>(
    `/games/${id}/analysis?max_nodes=${maxNodes}&max_seconds=${maxSeconds}`);
}
