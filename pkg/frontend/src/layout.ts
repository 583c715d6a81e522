import type { GraphPayload } from "./types.js";

// The layout toggle offers exactly these two; a radial option is
// deliberately not part of the surface.
export const LAYOUT_MODES = ["force-directed", "sankey"] as const;

export type LayoutMode = (typeof LAYOUT_MODES)[number];

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  seed?: number;
}

const STROKE_MIN = 1.5;
const STROKE_MAX = 8;

// Linear in the weight, so unequal weights always get unequal widths.
export function strokeWidth(weight: number, maxWeight: number): number {
  const span = Math.max(1, maxWeight);
  return STROKE_MIN + (STROKE_MAX - STROKE_MIN) * (weight / span);
}

// Deterministic PRNG so layouts are reproducible across renders.
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

// Plain spring-electric layout: repulsion between every pair, springs
// along edges, gentle pull to the center.  Small graphs settle fast.
export function forceDirectedLayout(
  graph: GraphPayload,
  options: LayoutOptions,
): Map<string, Point> {
  const { width, height } = options;
  const iterations = options.iterations ?? 150;
  const random = mulberry32(options.seed ?? 1);
  const ids = graph.nodes.map((n) => n.person_id);
  const positions = new Map<string, Point>();
  const radius = Math.min(width, height) / 3;
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / Math.max(1, ids.length);
    positions.set(id, {
      x: width / 2 + radius * Math.cos(angle) + (random() - 0.5),
      y: height / 2 + radius * Math.sin(angle) + (random() - 0.5),
    });
  });

  const springLength = radius;
  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    const forces = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));

    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = positions.get(ids[i]!)!;
        const b = positions.get(ids[j]!)!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const sq = Math.max(dx * dx + dy * dy, 1);
        const push = (springLength * springLength) / sq / Math.sqrt(sq);
        const fa = forces.get(ids[i]!)!;
        const fb = forces.get(ids[j]!)!;
        fa.x += dx * push;
        fa.y += dy * push;
        fb.x -= dx * push;
        fb.y -= dy * push;
      }
    }

    for (const edge of graph.edges) {
      if (edge.from === edge.to) continue; // self-loops do not attract
      const a = positions.get(edge.from);
      const b = positions.get(edge.to);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const distance = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = (distance - springLength) / distance / 8;
      const fa = forces.get(edge.from)!;
      const fb = forces.get(edge.to)!;
      fa.x += dx * pull;
      fa.y += dy * pull;
      fb.x -= dx * pull;
      fb.y -= dy * pull;
    }

    for (const id of ids) {
      const p = positions.get(id)!;
      const f = forces.get(id)!;
      f.x += (width / 2 - p.x) / 200;
      f.y += (height / 2 - p.y) / 200;
      p.x += f.x * cooling * 4;
      p.y += f.y * cooling * 4;
      p.x = Math.min(width - 20, Math.max(20, p.x));
      p.y = Math.min(height - 20, Math.max(20, p.y));
    }
  }
  return positions;
}

export interface SankeyBand {
  from: string;
  to: string;
  weight: number;
  // Pixel geometry: left edge of the band at the source column, right
  // edge at the target column.
  x0: number;
  y0: number;
  x1: number;
  y1: number;
  thickness: number;
}

export interface SankeyColumnNode {
  id: string;
  x: number;
  y: number;
  height: number;
}

export interface SankeyDiagram {
  sources: SankeyColumnNode[];
  targets: SankeyColumnNode[];
  bands: SankeyBand[];
}

// Two-column flow: requesters on the left, interrupted performers on
// the right, band thickness proportional to switch-request count.
export function sankeyLayout(graph: GraphPayload, options: LayoutOptions): SankeyDiagram {
  const { width, height } = options;
  const outgoing = new Map<string, number>();
  const incoming = new Map<string, number>();
  for (const edge of graph.edges) {
    outgoing.set(edge.from, (outgoing.get(edge.from) ?? 0) + edge.weight);
    incoming.set(edge.to, (incoming.get(edge.to) ?? 0) + edge.weight);
  }
  const total = graph.edges.reduce((sum, e) => sum + e.weight, 0);
  if (total === 0) return { sources: [], targets: [], bands: [] };

  const gap = 8;
  const scale = (height - gap * Math.max(0, outgoing.size - 1)) / total;

  const layoutColumn = (weights: Map<string, number>, x: number): SankeyColumnNode[] => {
    const column: SankeyColumnNode[] = [];
    let y = 0;
    for (const id of [...weights.keys()].sort()) {
      const h = weights.get(id)! * scale;
      column.push({ id, x, y, height: h });
      y += h + gap;
    }
    return column;
  };

  const sources = layoutColumn(outgoing, 0);
  const targets = layoutColumn(incoming, width - 12);

  const sourceOffset = new Map(sources.map((n) => [n.id, n.y]));
  const targetOffset = new Map(targets.map((n) => [n.id, n.y]));
  const bands: SankeyBand[] = [];
  const ordered = [...graph.edges].sort((a, b) =>
    a.from === b.from ? (a.to < b.to ? -1 : 1) : a.from < b.from ? -1 : 1,
  );
  for (const edge of ordered) {
    const thickness = edge.weight * scale;
    const y0 = sourceOffset.get(edge.from)!;
    const y1 = targetOffset.get(edge.to)!;
    bands.push({
      from: edge.from,
      to: edge.to,
      weight: edge.weight,
      x0: 12,
      y0,
      x1: width - 12,
      y1,
      thickness,
    });
    sourceOffset.set(edge.from, y0 + thickness);
    targetOffset.set(edge.to, y1 + thickness);
  }
  return { sources, targets, bands };
}
