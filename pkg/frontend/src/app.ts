/**
 * UI state machine, DOM-free so it can be driven headlessly in tests.
 *
 * Every painted span comes from a service span report; the client never
 * scores anything itself. Settings changes schedule a request through the
 * burst-collapsing scheduler, so dragging a slider settles on the final
 * value with at most one request in flight and one queued.
 */

import { ApiClient, ApiError, type SearchHit, type SpanRecord } from "./api.js";
import { RequestScheduler } from "./scheduler.js";

export type Mode = "summarize" | "search";

export interface UiState {
  documentId: string | null;
  documentText: string;
  tokenCount: number;
  query: string;
  unbiased: boolean;
  window: number;
  pooling: string;
  underlinePct: number;
  highlightPct: number;
  mode: Mode;
  topK: number;
  spans: SpanRecord[] | null;
  hits: SearchHit[] | null;
  cacheHit: boolean | null;
  pending: boolean;
  error: string | null;
}

export const UNBIASED_QUERY = "-1";

type Listener = (state: UiState) => void;
type Download = (filename: string, content: string, mimeType: string) => void;

function clampPct(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(100, Math.max(0, value));
}

export class AppController {
  readonly state: UiState = {
    documentId: null,
    documentText: "",
    tokenCount: 0,
    query: "",
    unbiased: false,
    window: 6,
    pooling: "mean",
    underlinePct: 70,
    highlightPct: 65,
    mode: "summarize",
    topK: 10,
    spans: null,
    hits: null,
    cacheHit: null,
    pending: false,
    error: null,
  };

  private listeners: Listener[] = [];

  constructor(
    private api: ApiClient,
    private scheduler: RequestScheduler = new RequestScheduler(),
    private download: Download = () => {},
  ) {}

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** The query string actually sent: the sentinel when unbiased is on. */
  effectiveQuery(): string {
    return this.state.unbiased ? UNBIASED_QUERY : this.state.query;
  }

  async uploadDocument(text: string): Promise<void> {
    this.state.pending = true;
    this.state.error = null;
    this.notify();
    try {
      const created = await this.api.createDocument(text);
      this.state.documentId = created.id;
      this.state.documentText = text;
      this.state.tokenCount = created.token_count;
      this.state.spans = null;
      this.state.hits = null;
      this.state.cacheHit = null;
    } catch (error) {
      this.state.error = describe(error);
      this.state.pending = false;
      this.notify();
      return;
    }
    this.applySettings();
  }

  setQuery(query: string): void {
    this.state.query = query;
    this.applySettings();
  }

  setUnbiased(unbiased: boolean): void {
    this.state.unbiased = unbiased;
    this.applySettings();
  }

  setWindow(window: number): void {
    this.state.window = Math.max(1, Math.round(window) || 1);
    this.applySettings();
  }

  setPooling(pooling: string): void {
    this.state.pooling = pooling;
    this.applySettings();
  }

  setUnderlinePct(pct: number): void {
    this.state.underlinePct = clampPct(pct);
    this.applySettings();
  }

  setHighlightPct(pct: number): void {
    this.state.highlightPct = clampPct(pct);
    this.applySettings();
  }

  setTopK(k: number): void {
    this.state.topK = Math.max(1, Math.round(k) || 1);
    this.applySettings();
  }

  setMode(mode: Mode): void {
    this.state.mode = mode;
    this.applySettings();
  }

  /** Push the current settings to the service and repaint from its report. */
  applySettings(): void {
    if (this.state.documentId === null) return;
    if (!this.state.unbiased && this.state.query.trim() === "") {
      this.state.error =
        this.state.mode === "search"
          ? "enter a search query"
          : "enter a bias query or switch to unbiased";
      this.notify();
      return;
    }
    if (this.state.mode === "search" && this.state.unbiased) {
      this.state.error = "search needs a text query; turn off unbiased mode";
      this.notify();
      return;
    }
    this.state.pending = true;
    this.state.error = null;
    this.notify();

    const id = this.state.documentId;
    const mode = this.state.mode;
    const params = {
      query: this.effectiveQuery(),
      window: this.state.window,
      pooling: this.state.pooling,
    };
    const task =
      mode === "summarize"
        ? async () => {
            const response = await this.api.summary(id, {
              ...params,
              underline_pct: this.state.underlinePct,
              highlight_pct: this.state.highlightPct,
              format: "spans",
            });
            this.state.spans = response.spans ?? [];
            this.state.hits = null;
            this.state.cacheHit = response.cache_hit;
          }
        : async () => {
            const response = await this.api.search(id, {
              ...params,
              k: this.state.topK,
              dedupe: true,
            });
            this.state.hits = response.hits;
            this.state.spans = null;
            this.state.cacheHit = response.cache_hit;
          };

    this.scheduler.schedule(async () => {
      try {
        await task();
      } catch (error) {
        this.state.error = describe(error); // keep the last good report on screen
      }
      this.notify();
    });
    void this.scheduler.settled().then(() => {
      this.state.pending = false;
      this.notify();
    });
  }

  get exportEnabled(): boolean {
    return this.state.mode === "summarize" && this.state.documentId !== null;
  }

  /** Download the current summary as an HTML card; returns its content. */
  async exportCard(): Promise<string | null> {
    if (!this.exportEnabled) return null;
    try {
      const response = await this.api.summary(this.state.documentId!, {
        query: this.effectiveQuery(),
        window: this.state.window,
        pooling: this.state.pooling,
        underline_pct: this.state.underlinePct,
        highlight_pct: this.state.highlightPct,
        format: "html",
      });
      const content = response.content ?? "";
      this.download("card.html", content, "text/html");
      return content;
    } catch (error) {
      this.state.error = describe(error);
      this.notify();
      return null;
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}
