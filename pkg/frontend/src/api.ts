import type {
  AdvicePayload,
  CueName,
  GraphPayload,
  PatternsPayload,
  ResumptionPlanPayload,
  SuspensionPayload,
} from "./types.js";

// The client never touches fetch directly; everything goes through an
// injectable transport so tests can record and script the traffic.
export interface ApiRequest {
  method: "GET" | "POST";
  path: string;
  body?: unknown;
}

export interface ApiResponse {
  status: number;
  body: unknown;
}

export type Transport = (request: ApiRequest) => Promise<ApiResponse>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export function fetchTransport(baseUrl: string): Transport {
  return async (request) => {
    const response = await fetch(baseUrl + request.path, {
      method: request.method,
      headers: request.body === undefined ? undefined : { "content-type": "application/json" },
      body: request.body === undefined ? undefined : JSON.stringify(request.body),
    });
    const text = await response.text();
    return { status: response.status, body: text === "" ? null : JSON.parse(text) };
  };
}

interface PendingVisit {
  task: string;
  cue: CueName;
  at?: string;
}

export class ApiClient {
  // Cue visits wait here until the service confirms them, in click order.
  private readonly visitQueue: PendingVisit[] = [];
  private flushing = false;

  constructor(private readonly transport: Transport) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.transport({ method: "GET", path });
    if (response.status >= 400) {
      throw new ApiError(response.status, detailOf(response.body));
    }
    return response.body as T;
  }

  patterns(taskType: string): Promise<PatternsPayload> {
    return this.get(`/patterns?task_type=${encodeURIComponent(taskType)}`);
  }

  communicationGraph(window?: { from?: string; to?: string }): Promise<GraphPayload> {
    const params = new URLSearchParams();
    if (window?.from) params.set("from", window.from);
    if (window?.to) params.set("to", window.to);
    const query = params.toString();
    return this.get(`/graph/communication${query ? "?" + query : ""}`);
  }

  adviceSwitch(task: string, context: Record<string, string> = {}): Promise<AdvicePayload> {
    const params = new URLSearchParams({ task, ...context });
    return this.get(`/advice/switch?${params.toString()}`);
  }

  suspensionStatus(task: string): Promise<SuspensionPayload> {
    return this.get(`/suspension/${encodeURIComponent(task)}`);
  }

  resumptionPlan(task: string): Promise<ResumptionPlanPayload> {
    return this.get(`/resumption/${encodeURIComponent(task)}/cues`);
  }

  // Optimistic: the visit is queued immediately and the queue is flushed
  // in the background.  A failed POST leaves the queue untouched so a
  // later flush retries in the original order.
  recordCueVisit(task: string, cue: CueName, at?: string): Promise<number> {
    this.visitQueue.push(at === undefined ? { task, cue } : { task, cue, at });
    return this.flushVisits();
  }

  get pendingVisits(): number {
    return this.visitQueue.length;
  }

  async flushVisits(): Promise<number> {
    if (this.flushing) return 0;
    this.flushing = true;
    let posted = 0;
    try {
      while (this.visitQueue.length > 0) {
        const visit = this.visitQueue[0]!;
        const body: Record<string, string> = { cue: visit.cue };
        if (visit.at !== undefined) body.at = visit.at;
        let response;
        try {
          response = await this.transport({
            method: "POST",
            path: `/resumption/${encodeURIComponent(visit.task)}/cue-visit`,
            body,
          });
        } catch {
          break; // offline: keep the queue for the next flush
        }
        if (response.status >= 500) break;
        // 4xx means the service refused this visit outright; dropping it
        // is the only way the rest of the queue can ever drain.
        this.visitQueue.shift();
        if (response.status < 400) posted += 1;
      }
    } finally {
      this.flushing = false;
    }
    return posted;
  }
}

function detailOf(body: unknown): string {
  if (body !== null && typeof body === "object" && "detail" in body) {
    return String((body as { detail: unknown }).detail);
  }
  return JSON.stringify(body);
}
