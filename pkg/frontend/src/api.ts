// Thin typed client for the issuemap API. All graph math, recommendation
// ranking, and rule evaluation happen server-side; this client only moves
// JSON.

import type {
  ConsistencyReport,
  IssueDetail,
  MapResponse,
  Recommendation,
  Stats,
} from "./types.js";
import type { Filters } from "./state.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const error = (body as { error?: { code?: string; message?: string } } | null)?.error;
      throw new ApiError(
        response.status,
        error?.code ?? "unknown",
        error?.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }

  issue(key: string, includeComments = false): Promise<IssueDetail> {
    const query = includeComments ? "?comments=true" : "";
    return this.request(`/issues/${encodeURIComponent(key)}${query}`);
  }

  map(key: string, depth: number, filters: Filters = {}): Promise<MapResponse> {
    const params = new URLSearchParams({ depth: String(depth) });
    for (const [name, value] of Object.entries(filters)) {
      if (value) params.set(name, value);
    }
    return this.request(`/issues/${encodeURIComponent(key)}/map?${params}`);
  }

  recommendations(key: string): Promise<Recommendation[]> {
    return this.request(`/issues/${encodeURIComponent(key)}/recommendations`);
  }

  decide(
    key: string,
    candidate: string,
    decision: "accept" | "reject",
    type?: string,
  ): Promise<{ status: string; version: number }> {
    const body: Record<string, string> = { decision };
    if (type) body.type = type;
    return this.request(
      `/issues/${encodeURIComponent(key)}/recommendations/${encodeURIComponent(candidate)}`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
  }

  consistency(key: string, depth: number): Promise<ConsistencyReport> {
    return this.request(
      `/issues/${encodeURIComponent(key)}/consistency?depth=${depth}`,
    );
  }

  stats(): Promise<Stats> {
    return this.request("/stats");
  }
}
