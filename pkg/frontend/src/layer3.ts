import type { ApiClient } from "./api.js";
import { CUE_NAMES, type CueName, type ResumptionPlanPayload } from "./types.js";

// The panel's standing order when no mined plan has arrived yet:
// annotations and thumbnails first, the behavior graph last.
export const DEFAULT_CUE_ORDER: readonly CueName[] = CUE_NAMES;

export interface CuePanelState {
  order: readonly CueName[];
  activeCue: CueName | null;
  payload: unknown[];
  sessionId: string | null;
}

// Layer 3: the cue panel shown at resumption time.  Clicking a cue
// reveals its payload and records the visit through the API client's
// ordered queue.
export class CuePanel {
  private plan: ResumptionPlanPayload | null = null;
  private active: CueName | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly taskId: string,
  ) {}

  loadPlan(plan: ResumptionPlanPayload): void {
    this.plan = plan;
    this.active = null;
  }

  get state(): CuePanelState {
    return {
      order: this.plan === null ? DEFAULT_CUE_ORDER : this.plan.cues,
      activeCue: this.active,
      payload:
        this.plan !== null && this.active !== null ? this.plan.payloads[this.active] : [],
      sessionId: this.plan === null ? null : this.plan.session_id,
    };
  }

  async clickCue(cue: CueName, at?: string): Promise<void> {
    this.active = cue;
    await this.api.recordCueVisit(this.taskId, cue, at);
  }
}
