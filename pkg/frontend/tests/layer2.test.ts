import { describe, expect, it } from "vitest";

import { buildReminder } from "../src/layer2.js";
import { renderReminder } from "../src/render.js";
import { suspensionStatus } from "./helpers.js";

describe("buildReminder", () => {
  it("shows no pin when nothing is suspended", () => {
    expect(buildReminder(null)).toBeNull();
    expect(renderReminder(null)).toBe("");
  });

  it("pins the suspended task with its fragment counter", () => {
    const surface = buildReminder(suspensionStatus())!;
    expect(surface.pin.fragmentCount).toBe(2);
    expect(surface.pin.thumbnail).toBe("t1#frag2");
    expect(surface.escalated).toBe(false);
    const html = renderReminder(surface);
    expect(html).toContain("fragments so far: 2");
    expect(html).not.toContain("trap-risk");
  });

  it("counts down to the next scheduled reminder", () => {
    const surface = buildReminder(suspensionStatus({ elapsed_s: 100 }))!;
    // Past the 60s popup, so the 120s one is next.
    expect(surface.countdownS).toBe(20);
    expect(surface.nextChannel).toBe("popup");
    expect(surface.popupNow).toBe(true);
  });

  it("escalates immediately on trap risk", () => {
    const surface = buildReminder(suspensionStatus({ trap: true, elapsed_s: 700000 }))!;
    expect(surface.escalated).toBe(true);
    expect(surface.popupNow).toBe(true);
    const html = renderReminder(surface);
    expect(html).toContain("trap-risk");
    expect(html).toContain('class="popup"');
  });

  it("passes the narrative through verbatim", () => {
    const status = suspensionStatus();
    status.narrative = {
      task_type: "modeling",
      antecedent: [{ key: "initiator", value: "self" }],
      consequent: [{ measure: "interruption_lag", level: "high" }],
      support: 0.6,
      confidence: 1,
      support_fraction: "3/5",
      confidence_fraction: "1",
      narrative: "Self-switching a requirements modeling task contributes to a greater interruption lag (confidence 100%, support 60%)",
    };
    const surface = buildReminder(status)!;
    expect(surface.pin.narrative).toBe(status.narrative.narrative);
  });
});
