import type { GraphScene } from "./layer1.js";
import type { ReminderSurface } from "./layer2.js";
import type { CuePanelState } from "./layer3.js";
import type { ProfileCard } from "./layer1.js";

// Pure string builders: every surface renders to markup with no DOM
// access, so the views are testable as plain functions.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderGraphSvg(scene: GraphScene, width: number, height: number): string {
  if (scene.emptyMessage !== null) {
    return `<p class="empty-state">${escapeHtml(scene.emptyMessage)}</p>`;
  }
  const parts: string[] = [
    `<svg viewBox="0 0 ${width} ${height}" role="img" data-layout="${scene.mode}">`,
  ];
  if (scene.mode === "force-directed") {
    for (const stroke of scene.strokes) {
      const a = scene.positions.get(stroke.from);
      const b = scene.positions.get(stroke.to);
      if (!a || !b) continue;
      if (stroke.from === stroke.to) {
        parts.push(
          `<circle class="self-loop" cx="${a.x.toFixed(1)}" cy="${(a.y - 18).toFixed(1)}"` +
            ` r="12" fill="none" stroke-width="${stroke.width.toFixed(2)}"` +
            ` data-edge="${stroke.from}->${stroke.to}"/>`,
        );
      } else {
        parts.push(
          `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}"` +
            ` x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}"` +
            ` stroke-width="${stroke.width.toFixed(2)}"` +
            ` data-edge="${stroke.from}->${stroke.to}" data-weight="${stroke.weight}"/>`,
        );
      }
    }
    for (const [id, p] of scene.positions) {
      parts.push(
        `<g class="node" data-node="${escapeHtml(id)}">` +
          `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="10"/>` +
          `<text x="${p.x.toFixed(1)}" y="${(p.y + 24).toFixed(1)}">${escapeHtml(id)}</text></g>`,
      );
    }
  } else if (scene.sankey !== null) {
    for (const band of scene.sankey.bands) {
      const midY0 = band.y0 + band.thickness / 2;
      const midY1 = band.y1 + band.thickness / 2;
      parts.push(
        `<path class="band" d="M ${band.x0} ${midY0.toFixed(1)} C` +
          ` ${(band.x0 + band.x1) / 2} ${midY0.toFixed(1)},` +
          ` ${(band.x0 + band.x1) / 2} ${midY1.toFixed(1)},` +
          ` ${band.x1} ${midY1.toFixed(1)}"` +
          ` fill="none" stroke-width="${band.thickness.toFixed(2)}"` +
          ` data-edge="${band.from}->${band.to}" data-weight="${band.weight}"/>`,
      );
    }
    for (const node of [...scene.sankey.sources, ...scene.sankey.targets]) {
      parts.push(
        `<rect x="${node.x}" y="${node.y.toFixed(1)}" width="12"` +
          ` height="${Math.max(2, node.height).toFixed(1)}" data-node="${escapeHtml(node.id)}"/>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderBanner(scene: GraphScene): string {
  const banner = scene.banner;
  if (banner === null) return "";
  const classes = ["banner", banner.colorClass].filter(Boolean).join(" ");
  const glyph = banner.glyph === null ? "" : `<span class="glyph">${banner.glyph}</span> `;
  return `<div class="${classes}">${glyph}${escapeHtml(banner.text)}</div>`;
}

export function renderHoverLabel(card: ProfileCard | null): string {
  if (card === null) return "";
  return `<div class="hover-label">${escapeHtml(card.label)}</div>`;
}

export function renderReminder(surface: ReminderSurface | null): string {
  if (surface === null) return "";
  const classes = ["pin", surface.escalated ? "trap-risk" : null].filter(Boolean).join(" ");
  const narrative =
    surface.pin.narrative === null
      ? ""
      : `<p class="narrative">${escapeHtml(surface.pin.narrative)}</p>`;
  const countdown =
    surface.countdownS === null
      ? ""
      : `<span class="countdown">next ${surface.nextChannel} in ${Math.round(surface.countdownS)}s</span>`;
  return (
    `<div class="${classes}" data-task="${escapeHtml(surface.taskId)}">` +
    `<img alt="task thumbnail" data-thumbnail="${escapeHtml(surface.pin.thumbnail)}"/>` +
    `<span class="fragments">fragments so far: ${surface.pin.fragmentCount}</span>` +
    narrative +
    countdown +
    "</div>" +
    (surface.popupNow ? `<div class="popup">Suspended task ${escapeHtml(surface.taskId)} is waiting.</div>` : "")
  );
}

export function renderCuePanel(state: CuePanelState): string {
  const buttons = state.order
    .map((cue) => {
      const active = cue === state.activeCue ? " active" : "";
      return `<button class="cue${active}" data-cue="${cue}">${cue.replace("_", " ")}</button>`;
    })
    .join("");
  const payload =
    state.activeCue === null
      ? ""
      : `<pre class="payload">${escapeHtml(JSON.stringify(state.payload, null, 2))}</pre>`;
  return `<nav class="cue-order">${buttons}</nav>${payload}`;
}
