import {
  forceDirectedLayout,
  sankeyLayout,
  strokeWidth,
  LAYOUT_MODES,
  type LayoutMode,
  type LayoutOptions,
  type Point,
  type SankeyDiagram,
} from "./layout.js";
import type { AdvicePayload, GraphNodePayload, GraphPayload } from "./types.js";

export interface ProfileCard {
  id: string;
  label: string; // the hover label, ready to show
  name: string | null;
  role: string | null;
  projects: string[];
}

export interface EdgeStroke {
  from: string;
  to: string;
  weight: number;
  width: number;
}

export interface NarrativeBanner {
  text: string; // shown verbatim, never rewritten client-side
  blockage: boolean; // red hue when set
  boredom: boolean; // object glyph when set
  glyph: string | null;
  colorClass: string | null;
}

export interface GraphScene {
  mode: LayoutMode;
  emptyMessage: string | null;
  positions: Map<string, Point>;
  sankey: SankeyDiagram | null;
  strokes: EdgeStroke[];
  banner: NarrativeBanner | null;
}

function cardLabel(node: GraphNodePayload): string {
  const name = node.name ?? node.person_id;
  const role = node.role ? ` (${node.role})` : "";
  const projects = node.projects.length > 0 ? ` [${node.projects.join(", ")}]` : "";
  return `${name}${role}${projects}`;
}

// Layer 1: who interrupts whom.  Profile cards are built up front from
// the graph payload, so hovering never waits on another request.
export class GraphView {
  readonly modes = LAYOUT_MODES;
  private mode: LayoutMode = "force-directed";
  private graph: GraphPayload = { nodes: [], edges: [] };
  private cards = new Map<string, ProfileCard>();
  private banner: NarrativeBanner | null = null;
  hoveredNode: string | null = null;

  constructor(private readonly layoutOptions: LayoutOptions) {}

  get layoutMode(): LayoutMode {
    return this.mode;
  }

  setLayout(mode: LayoutMode): void {
    if (!LAYOUT_MODES.includes(mode)) {
      throw new Error(`unknown layout mode ${mode}`);
    }
    this.mode = mode;
  }

  loadGraph(graph: GraphPayload): void {
    this.graph = graph;
    this.cards = new Map(
      graph.nodes.map((node) => [
        node.person_id,
        {
          id: node.person_id,
          label: cardLabel(node),
          name: node.name,
          role: node.role,
          projects: node.projects,
        },
      ]),
    );
  }

  loadAdvice(advice: AdvicePayload): void {
    const first = advice.rules[0];
    if (first === undefined) {
      this.banner = null;
      return;
    }
    this.banner = {
      text: first.narrative,
      blockage: advice.flags.blockage,
      boredom: advice.flags.boredom,
      glyph: advice.flags.boredom ? "◆" : null,
      colorClass: advice.flags.blockage ? "alert-red" : null,
    };
  }

  profileCard(personId: string): ProfileCard | null {
    return this.cards.get(personId) ?? null;
  }

  hover(personId: string | null): ProfileCard | null {
    this.hoveredNode = personId;
    return personId === null ? null : this.profileCard(personId);
  }

  scene(): GraphScene {
    if (this.graph.nodes.length === 0 && this.graph.edges.length === 0) {
      return {
        mode: this.mode,
        emptyMessage: "No switch requests recorded yet.",
        positions: new Map(),
        sankey: null,
        strokes: [],
        banner: this.banner,
      };
    }
    const maxWeight = this.graph.edges.reduce((max, e) => Math.max(max, e.weight), 0);
    const strokes = this.graph.edges.map((edge) => ({
      from: edge.from,
      to: edge.to,
      weight: edge.weight,
      width: strokeWidth(edge.weight, maxWeight),
    }));
    return {
      mode: this.mode,
      emptyMessage: null,
      positions:
        this.mode === "force-directed"
          ? forceDirectedLayout(this.graph, this.layoutOptions)
          : new Map(),
      sankey: this.mode === "sankey" ? sankeyLayout(this.graph, this.layoutOptions) : null,
      strokes,
      banner: this.banner,
    };
  }
}
