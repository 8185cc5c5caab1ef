/**
 * Session API client.
 *
 * Thin fetch wrapper over the annotation service; one method per
 * endpoint. Service errors are rethrown as ApiError carrying the
 * machine-readable code from the response body verbatim.
 */

import type {
  ActionsResponse,
  CreateSessionRequest,
  Decision,
  ErrorBody,
  FinalizeResponse,
  ViewState,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = typeof fetch;

export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token?: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["x-arsg-token"] = this.token;
    return headers;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: Partial<ErrorBody> = {};
      try {
        body = (await response.json()) as ErrorBody;
      } catch {
        // non-JSON error body; fall through to the generic message
      }
      throw new ApiError(
        body.code ?? "HttpError",
        body.message ?? `request failed with status ${response.status}`,
        response.status,
      );
    }
    return response;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.request(path, { headers: this.headers(false) });
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body?: unknown): Promise<T> {
    const response = await this.request(path, {
      method: "POST",
      headers: this.headers(body !== undefined),
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    return (await response.json()) as T;
  }

  createSession(request: CreateSessionRequest): Promise<ViewState> {
    return this.postJson("/sessions", request);
  }

  state(sessionId: string): Promise<ViewState> {
    return this.getJson(`/sessions/${sessionId}`);
  }

  actions(sessionId: string): Promise<ActionsResponse> {
    return this.getJson(`/sessions/${sessionId}/actions`);
  }

  decide(sessionId: string, decision: Decision): Promise<ViewState> {
    return this.postJson(`/sessions/${sessionId}/decisions`, decision);
  }

  undo(sessionId: string): Promise<ViewState> {
    return this.postJson(`/sessions/${sessionId}/undo`);
  }

  finalize(sessionId: string): Promise<FinalizeResponse> {
    return this.postJson(`/sessions/${sessionId}/finalize`);
  }

  /** Raw log document text, byte for byte as the service sent it. */
  async exportLogText(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/log`, {
      headers: this.headers(false),
    });
    return response.text();
  }
}
