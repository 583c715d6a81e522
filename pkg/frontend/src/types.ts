// Payload shapes of the switchlens HTTP API, mirrored field for field.

export const CUE_NAMES = [
  "annotation",
  "thumbnail",
  "verbal",
  "eye",
  "behavior_graph",
] as const;

export type CueName = (typeof CUE_NAMES)[number];

export interface RulePayload {
  task_type: string;
  antecedent: { key: string; value: string }[];
  consequent: { measure: string; level: string }[];
  support: number;
  confidence: number;
  support_fraction: string;
  confidence_fraction: string;
  narrative: string;
}

export interface SequenceRulePayload {
  sequence: CueName[];
  support: number;
  confidence: number;
  support_fraction: string;
  confidence_fraction: string;
  narrative: string;
}

export interface GraphNodePayload {
  person_id: string;
  name: string | null;
  role: string | null;
  projects: string[];
}

export interface GraphEdgePayload {
  from: string;
  to: string;
  weight: number;
}

export interface GraphPayload {
  nodes: GraphNodePayload[];
  edges: GraphEdgePayload[];
}

export interface AdvicePayload {
  task_id: string;
  task_type: string;
  context: Record<string, string>;
  rules: RulePayload[];
  predicted_levels: Record<string, string | null>;
  flags: { blockage: boolean; boredom: boolean };
  graph_slice: GraphPayload;
}

export interface ReminderEntry {
  after_s: number;
  at: string;
  channel: "pin" | "popup" | "email";
}

export interface SuspensionPayload {
  task_id: string;
  phase: string;
  fragments_so_far: number;
  depth: number;
  suspended_at: string;
  elapsed_s: number;
  trap: boolean;
  trap_horizon_s: number;
  reminders: {
    policy: string;
    first_delay_s: number;
    schedule: ReminderEntry[];
  };
  narrative: RulePayload | null;
}

export interface ResumptionPlanPayload {
  task_id: string;
  session_id: string;
  cues: CueName[];
  payloads: Record<CueName, unknown[]>;
  recall_estimate_s: number;
  rules: SequenceRulePayload[];
}

export interface PatternsPayload {
  task_type: string;
  min_support: number;
  min_confidence: number;
  rules: RulePayload[];
}

export interface IngestReportPayload {
  accepted: number;
  duplicates: number;
  rejected: { line_no: number | null; reason: string }[];
}
