import { ApiClient, fetchTransport } from "./api.js";
import { GraphView } from "./layer1.js";
import { buildReminder } from "./layer2.js";
import { CuePanel } from "./layer3.js";
import {
  renderBanner,
  renderCuePanel,
  renderGraphSvg,
  renderHoverLabel,
  renderReminder,
} from "./render.js";
import { LAYOUT_MODES, type LayoutMode } from "./layout.js";
import type { CueName, SuspensionPayload } from "./types.js";

const WIDTH = 720;
const HEIGHT = 480;

function element(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing #${id}`);
  return found;
}

function queryString(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

async function boot(): Promise<void> {
  const api = new ApiClient(fetchTransport(""));
  const task = queryString("task", "");
  const view = new GraphView({ width: WIDTH, height: HEIGHT, seed: 7 });
  const panel = new CuePanel(api, task);

  const graphHost = element("graph");
  const bannerHost = element("banner");
  const hoverHost = element("hover");
  const reminderHost = element("reminder");
  const cueHost = element("cues");
  const offlineHost = element("offline");

  const drawGraph = () => {
    const scene = view.scene();
    graphHost.innerHTML = renderGraphSvg(scene, WIDTH, HEIGHT);
    bannerHost.innerHTML = renderBanner(scene);
    for (const node of graphHost.querySelectorAll<SVGGElement>("[data-node]")) {
      node.addEventListener("mouseenter", () => {
        hoverHost.innerHTML = renderHoverLabel(view.hover(node.dataset.node ?? null));
      });
      node.addEventListener("mouseleave", () => {
        hoverHost.innerHTML = renderHoverLabel(view.hover(null));
      });
    }
  };

  const drawCues = () => {
    cueHost.innerHTML = renderCuePanel(panel.state);
    for (const button of cueHost.querySelectorAll<HTMLButtonElement>("button.cue")) {
      button.addEventListener("click", () => {
        void panel.clickCue(button.dataset.cue as CueName).then(drawCues);
      });
    }
  };

  for (const mode of LAYOUT_MODES) {
    element(`layout-${mode}`).addEventListener("click", () => {
      view.setLayout(mode as LayoutMode);
      drawGraph();
    });
  }

  try {
    view.loadGraph(await api.communicationGraph());
    offlineHost.hidden = true;
  } catch {
    offlineHost.hidden = false;
  }

  if (task !== "") {
    try {
      view.loadAdvice(await api.adviceSwitch(task));
    } catch {
      // Not an active task right now; the graph still renders.
    }
    let status: SuspensionPayload | null = null;
    try {
      status = await api.suspensionStatus(task);
    } catch {
      status = null;
    }
    reminderHost.innerHTML = renderReminder(buildReminder(status));
    try {
      panel.loadPlan(await api.resumptionPlan(task));
    } catch {
      // Not resuming; the default cue order stays.
    }
  }

  drawGraph();
  drawCues();
  window.setInterval(() => void api.flushVisits(), 5000);
}

void boot();
