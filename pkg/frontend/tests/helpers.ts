import type { ApiRequest, ApiResponse, Transport } from "../src/api.js";
import type {
  AdvicePayload,
  GraphPayload,
  ResumptionPlanPayload,
  SuspensionPayload,
} from "../src/types.js";

export interface RecordedCall {
  method: string;
  path: string;
  body?: unknown;
}

// A scripted transport: every call is recorded, responses come from the
// route table, and failures can be injected per-path.
export function recordedTransport(
  routes: Record<string, unknown>,
  options: { failing?: Set<string> } = {},
): { transport: Transport; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const transport: Transport = (request: ApiRequest): Promise<ApiResponse> => {
    calls.push(
      request.body === undefined
        ? { method: request.method, path: request.path }
        : { method: request.method, path: request.path, body: request.body },
    );
    if (options.failing?.has(request.path)) {
      return Promise.reject(new Error("network down"));
    }
    const key = `${request.method} ${request.path}`;
    if (key in routes) {
      const body = routes[key];
      return Promise.resolve({ status: request.method === "POST" ? 204 : 200, body });
    }
    return Promise.resolve({ status: 404, body: { detail: `no route ${key}` } });
  };
  return { transport, calls };
}

export const threeEdgeGraph: GraphPayload = {
  nodes: [
    { person_id: "p1", name: "Dana", role: "developer", projects: ["atlas"] },
    { person_id: "p2", name: "Lee", role: "analyst", projects: [] },
    { person_id: "p3", name: null, role: null, projects: [] },
  ],
  edges: [
    { from: "p2", to: "p1", weight: 1 },
    { from: "p3", to: "p1", weight: 3 },
    { from: "p1", to: "p1", weight: 7 },
  ],
};

export const samplePlan: ResumptionPlanPayload = {
  task_id: "t1",
  session_id: "t1#resume2",
  cues: ["verbal", "annotation", "thumbnail", "eye", "behavior_graph"],
  payloads: {
    annotation: [{ at: "2026-03-02T09:05:00.000Z", text: "left off at the submodel" }],
    thumbnail: ["t1#frag1"],
    verbal: [],
    eye: [],
    behavior_graph: ["/graph/communication"],
  },
  recall_estimate_s: 900,
  rules: [],
};

export const sampleAdvice: AdvicePayload = {
  task_id: "t1",
  task_type: "modeling",
  context: { initiator: "self" },
  rules: [
    {
      task_type: "modeling",
      antecedent: [
        { key: "initiator", value: "self" },
        { key: "time_of_day", value: "morning" },
      ],
      consequent: [{ measure: "interruption_lag", level: "high" }],
      support: 0.6,
      confidence: 1,
      support_fraction: "3/5",
      confidence_fraction: "1",
      narrative:
        "Self-switching a requirements modeling task in the morning contributes to a greater interruption lag (confidence 100%, support 60%)",
    },
  ],
  predicted_levels: { fragments: null, resumption_lag: null, interruption_lag: "high" },
  flags: { blockage: false, boredom: false },
  graph_slice: { nodes: [], edges: [] },
};

export function suspensionStatus(overrides: Partial<SuspensionPayload> = {}): SuspensionPayload {
  return {
    task_id: "t1",
    phase: "Suspended",
    fragments_so_far: 2,
    depth: 1,
    suspended_at: "2026-03-02T09:05:30.000Z",
    elapsed_s: 100,
    trap: false,
    trap_horizon_s: 604800,
    reminders: {
      policy: "median-resumption-lag, x2 backoff, capped at horizon",
      first_delay_s: 60,
      schedule: [
        { after_s: 0, at: "2026-03-02T09:05:30.000Z", channel: "pin" },
        { after_s: 60, at: "2026-03-02T09:06:30.000Z", channel: "popup" },
        { after_s: 120, at: "2026-03-02T09:07:30.000Z", channel: "popup" },
        { after_s: 604800, at: "2026-03-09T09:05:30.000Z", channel: "email" },
      ],
    },
    narrative: null,
    ...overrides,
  };
}
