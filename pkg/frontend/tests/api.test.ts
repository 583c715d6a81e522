import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { recordedTransport, sampleAdvice, threeEdgeGraph } from "./helpers.js";

describe("ApiClient", () => {
  it("fetches the communication graph, with and without a window", async () => {
    const { transport, calls } = recordedTransport({
      "GET /graph/communication": threeEdgeGraph,
      "GET /graph/communication?from=2026-03-02T00%3A00%3A00.000Z": threeEdgeGraph,
    });
    const api = new ApiClient(transport);
    const graph = await api.communicationGraph();
    expect(graph.edges.length).toBe(3);
    await api.communicationGraph({ from: "2026-03-02T00:00:00.000Z" });
    expect(calls.map((c) => c.path)).toEqual([
      "/graph/communication",
      "/graph/communication?from=2026-03-02T00%3A00%3A00.000Z",
    ]);
  });

  it("builds the advice query from the context", async () => {
    const { transport, calls } = recordedTransport({
      "GET /advice/switch?task=t1&initiator=self": sampleAdvice,
    });
    const api = new ApiClient(transport);
    const advice = await api.adviceSwitch("t1", { initiator: "self" });
    expect(advice.rules[0]!.confidence).toBe(1);
    expect(calls[0]!.path).toBe("/advice/switch?task=t1&initiator=self");
  });

  it("raises ApiError with the service detail", async () => {
    const { transport } = recordedTransport({});
    const api = new ApiClient(transport);
    await expect(api.suspensionStatus("nope")).rejects.toThrowError(ApiError);
    await expect(api.suspensionStatus("nope")).rejects.toThrow(/no route/);
  });

  it("drops a visit the service refuses, keeping the queue moving", async () => {
    const { transport, calls } = recordedTransport({});
    // No route: the recorded transport answers POSTs with 404.
    const api = new ApiClient(transport);
    await api.recordCueVisit("t1", "verbal");
    expect(api.pendingVisits).toBe(0);
    expect(calls.filter((c) => c.method === "POST").length).toBe(1);
  });
});
