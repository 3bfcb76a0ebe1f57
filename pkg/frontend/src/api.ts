/** Typed client for the summarization service's HTTP routes. */

export interface SpanRecord {
  tier: "underline" | "highlight";
  byte_start: number;
  byte_end: number;
  token_index: number;
  score: number;
}

export interface SummarySettings {
  window: number;
  pooling: string;
  underline_pct: number;
  highlight_pct: number;
  embeddings: string[];
}

export interface SummaryParams {
  query: string;
  window: number;
  pooling: string;
  underline_pct: number;
  highlight_pct: number;
  format: "spans" | "html" | "card";
}

export interface SummaryResponse {
  cache_hit: boolean;
  fingerprint: string;
  format: string;
  settings?: SummarySettings;
  spans?: SpanRecord[];
  content?: string;
}

export interface SearchHit {
  rank: number;
  token_index: number;
  byte_start: number;
  byte_end: number;
  score: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const code = typeof payload?.code === "string" ? payload.code : "UnknownError";
      const message = typeof payload?.message === "string" ? payload.message : response.statusText;
      throw new ApiError(response.status, code, message);
    }
    return payload as T;
  }

  createDocument(text: string): Promise<{ id: string; token_count: number }> {
    return this.request("POST", "/v1/documents", { text });
  }

  summary(id: string, params: SummaryParams): Promise<SummaryResponse> {
    return this.request("POST", `/v1/documents/${id}/summary`, params);
  }

  search(
    id: string,
    params: { query: string; window: number; pooling: string; k: number; dedupe: boolean },
  ): Promise<{ cache_hit: boolean; hits: SearchHit[] }> {
    return this.request("POST", `/v1/documents/${id}/search`, params);
  }

  deleteDocument(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/v1/documents/${id}`);
  }

  health(): Promise<{ status: string; total_dimension: number }> {
    return this.request("GET", "/v1/health");
  }
}
