// Episode service client: approvals and trajectory fetches over HTTP, plus
// the SSE event stream with automatic reconnection. All state changes flow
// through these endpoints; the UI holds no storage of its own.

import type { Observation, WireAction } from "./types.js";

export interface StepOutcomePayload {
  status: string;
  observation: Observation | null;
  error_detail?: string | null;
  answer?: string | null;
}

export interface ApprovalResponse {
  result: "ok" | "error" | "awaiting_approval";
  outcome?: StepOutcomePayload;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => globalThis.fetch(url, init),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async approve(episodeId: string, verdict: "approve" | "reject"): Promise<ApprovalResponse> {
    const response = await this.fetchImpl(this.url(`/episodes/${episodeId}/approval`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ verdict }),
    });
    return (await response.json()) as ApprovalResponse;
  }

  async fetchTrajectory(episodeId: string): Promise<string> {
    const response = await this.fetchImpl(this.url(`/episodes/${episodeId}/trajectory`));
    return await response.text();
  }
}

export interface StreamHandlers {
  onPendingAction?: (action: WireAction) => void;
  onStep?: (data: { status: string; index: number }) => void;
  onApproval?: (data: { verdict: string }) => void;
  onClosed?: () => void;
  onConnectionChange?: (connected: boolean) => void;
}

interface EventSourceLike {
  addEventListener(type: string, listener: (event: MessageEvent) => void): void;
  onopen: ((this: EventSource, ev: Event) => unknown) | null;
  onerror: ((this: EventSource, ev: Event) => unknown) | null;
  close(): void;
}

type EventSourceFactory = (url: string) => EventSourceLike;

const defaultFactory: EventSourceFactory = (url) => new EventSource(url) as unknown as EventSourceLike;

/** Subscribes to /episodes/{id}/events; reconnects after connection loss. */
export class EpisodeEventStream {
  private source: EventSourceLike | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private closed = false;

  constructor(
    readonly baseUrl: string,
    readonly episodeId: string,
    private readonly handlers: StreamHandlers,
    private readonly makeEventSource: EventSourceFactory = defaultFactory,
    readonly retryMs = 2000,
  ) {}

  connect(): void {
    if (this.closed) return;
    const url = `${this.baseUrl.replace(/\/$/, "")}/episodes/${this.episodeId}/events`;
    const source = this.makeEventSource(url);
    this.source = source;

    source.onopen = () => this.handlers.onConnectionChange?.(true);
    source.onerror = () => {
      this.handlers.onConnectionChange?.(false);
      source.close();
      if (!this.closed && this.retryTimer === null) {
        this.retryTimer = setTimeout(() => {
          this.retryTimer = null;
          this.connect();
        }, this.retryMs);
      }
    };

    source.addEventListener("pending_action", (event) => {
      const payload = JSON.parse(event.data) as { action: WireAction };
      this.handlers.onPendingAction?.(payload.action);
    });
    source.addEventListener("step", (event) => {
      this.handlers.onStep?.(JSON.parse(event.data));
    });
    source.addEventListener("approval", (event) => {
      this.handlers.onApproval?.(JSON.parse(event.data));
    });
    source.addEventListener("closed", () => {
      this.handlers.onClosed?.();
      this.close();
    });
  }

  close(): void {
    this.closed = true;
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    this.source?.close();
    this.source = null;
  }
}
