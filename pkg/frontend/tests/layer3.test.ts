import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { CuePanel, DEFAULT_CUE_ORDER } from "../src/layer3.js";
import { renderCuePanel } from "../src/render.js";
import { recordedTransport, samplePlan } from "./helpers.js";

function panelWithTransport(options: { failing?: Set<string> } = {}) {
  const recorded = recordedTransport({ "POST /resumption/t1/cue-visit": null }, options);
  const api = new ApiClient(recorded.transport);
  return { panel: new CuePanel(api, "t1"), api, calls: recorded.calls };
}

describe("CuePanel", () => {
  it("starts with the default cue order", () => {
    const { panel } = panelWithTransport();
    expect([...panel.state.order]).toEqual([
      "annotation",
      "thumbnail",
      "verbal",
      "eye",
      "behavior_graph",
    ]);
    expect([...DEFAULT_CUE_ORDER]).toEqual([
      "annotation",
      "thumbnail",
      "verbal",
      "eye",
      "behavior_graph",
    ]);
  });

  it("mirrors the fetched plan's order", () => {
    const { panel } = panelWithTransport();
    panel.loadPlan(samplePlan);
    expect([...panel.state.order]).toEqual(samplePlan.cues);
    expect(panel.state.sessionId).toBe("t1#resume2");
  });

  it("shows the clicked cue's payload", async () => {
    const { panel } = panelWithTransport();
    panel.loadPlan(samplePlan);
    await panel.clickCue("annotation");
    expect(panel.state.activeCue).toBe("annotation");
    expect(panel.state.payload).toEqual(samplePlan.payloads.annotation);
    const html = renderCuePanel(panel.state);
    expect(html).toContain('class="cue active"');
    expect(html).toContain("left off at the submodel");
  });

  it("POSTs cue visits in click order", async () => {
    const { panel, calls } = panelWithTransport();
    panel.loadPlan(samplePlan);
    await panel.clickCue("verbal");
    await panel.clickCue("eye");
    const posts = calls.filter((c) => c.method === "POST");
    expect(posts.map((c) => c.path)).toEqual([
      "/resumption/t1/cue-visit",
      "/resumption/t1/cue-visit",
    ]);
    expect(posts.map((c) => (c.body as { cue: string }).cue)).toEqual(["verbal", "eye"]);
  });

  it("queues offline visits and retries them in order", async () => {
    const failing = new Set(["/resumption/t1/cue-visit"]);
    const { panel, api, calls } = panelWithTransport({ failing });
    panel.loadPlan(samplePlan);
    await panel.clickCue("verbal");
    await panel.clickCue("eye");
    expect(api.pendingVisits).toBe(2);

    failing.clear(); // back online
    const posted = await api.flushVisits();
    expect(posted).toBe(2);
    expect(api.pendingVisits).toBe(0);
    const succeeded = calls.filter((c) => c.method === "POST").slice(-2);
    expect(succeeded.map((c) => (c.body as { cue: string }).cue)).toEqual(["verbal", "eye"]);
  });
});
