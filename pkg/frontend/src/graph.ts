/**
 * Deterministic graph layout and SVG rendering for model documents.
 *
 * Layout is layered: breadth-first ranks from the initial state, ranks
 * drawn left to right, nodes within a rank stacked in first-seen order.
 * There is no randomness anywhere, so rendering the same document twice
 * produces byte-identical SVG -- the "stable layout seed" the explorer
 * relies on when a view is re-rendered.
 */
import { ModelDoc, StateDocSchema } from "./types.js";
import { z } from "zod";

type StateDoc = z.infer<typeof StateDocSchema>;

export interface NodePosition {
  id: string | number;
  x: number;
  y: number;
  rank: number;
}

export interface LayoutOptions {
  rankGap?: number;
  nodeGap?: number;
  margin?: number;
}

export interface Layout {
  positions: Map<string | number, NodePosition>;
  width: number;
  height: number;
}

export function layoutModel(doc: ModelDoc, opts: LayoutOptions = {}): Layout {
  const rankGap = opts.rankGap ?? 160;
  const nodeGap = opts.nodeGap ?? 70;
  const margin = opts.margin ?? 60;

  const successors = new Map<string | number, Array<string | number>>();
  for (const state of doc.states) successors.set(state.id, []);
  for (const t of doc.transitions) {
    successors.get(t.src)?.push(t.dst);
  }

  const rank = new Map<string | number, number>();
  const queue: Array<string | number> = [doc.initial];
  rank.set(doc.initial, 0);
  while (queue.length > 0) {
    const current = queue.shift()!;
    for (const next of successors.get(current) ?? []) {
      if (!rank.has(next)) {
        rank.set(next, rank.get(current)! + 1);
        queue.push(next);
      }
    }
  }
  // anything unreachable goes to one trailing rank, declaration order
  const maxRank = Math.max(0, ...rank.values());
  for (const state of doc.states) {
    if (!rank.has(state.id)) rank.set(state.id, maxRank + 1);
  }

  const byRank = new Map<number, Array<string | number>>();
  for (const state of doc.states) {
    const r = rank.get(state.id)!;
    if (!byRank.has(r)) byRank.set(r, []);
    byRank.get(r)!.push(state.id);
  }

  const positions = new Map<string | number, NodePosition>();
  let tallest = 1;
  for (const [r, ids] of byRank) {
    tallest = Math.max(tallest, ids.length);
    ids.forEach((id, i) => {
      positions.set(id, {
        id,
        x: margin + r * rankGap,
        y: margin + i * nodeGap,
        rank: r,
      });
    });
  }
  const ranks = Math.max(...byRank.keys()) + 1;
  return {
    positions,
    width: margin * 2 + (ranks - 1) * rankGap,
    height: margin * 2 + (tallest - 1) * nodeGap,
  };
}

export interface RenderOptions extends LayoutOptions {
  /** state ids to draw highlighted (e.g. strategy-chosen successors) */
  highlightStates?: Set<string | number>;
  /** "src->dst" keys of edges on the highlighted path */
  highlightEdges?: Set<string>;
}

export function edgeKey(src: string | number, dst: string | number): string {
  return `${src}->${dst}`;
}

function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function valuationLabel(state: StateDoc): string {
  return Object.entries(state.valuation)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${k}=${v}`)
    .join(", ");
}

const NODE_RADIUS = 22;

/**
 * Render a model document as a self-contained SVG string.  Every node
 * carries a <title> with its full valuation, which browsers show as the
 * hover tooltip.
 */
export function renderSvg(doc: ModelDoc, opts: RenderOptions = {}): string {
  const layout = layoutModel(doc, opts);
  const highlightStates = opts.highlightStates ?? new Set();
  const highlightEdges = opts.highlightEdges ?? new Set();

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${layout.height}" ` +
      `class="model-graph" role="img">`,
  );
  parts.push(
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
      `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`,
  );

  for (const t of doc.transitions) {
    const a = layout.positions.get(t.src);
    const b = layout.positions.get(t.dst);
    if (!a || !b) continue;
    const key = edgeKey(t.src, t.dst);
    const cls = highlightEdges.has(key) ? "edge highlight" : "edge";
    if (t.src === t.dst) {
      // self loop drawn as a small arc above the node
      const r = NODE_RADIUS;
      parts.push(
        `<path class="${cls}" d="M ${a.x - r / 2} ${a.y - r} ` +
          `C ${a.x - r * 2} ${a.y - r * 3}, ${a.x + r * 2} ${a.y - r * 3}, ` +
          `${a.x + r / 2} ${a.y - r}" fill="none" marker-end="url(#arrow)">` +
          `<title>${esc(`${t.module}.${t.action}`)}</title></path>`,
      );
    } else {
      parts.push(
        `<line class="${cls}" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" ` +
          `marker-end="url(#arrow)">` +
          `<title>${esc(`${t.module}.${t.action}`)}</title></line>`,
      );
    }
  }

  for (const state of doc.states) {
    const p = layout.positions.get(state.id);
    if (!p) continue;
    const classes = ["node"];
    if (state.id === doc.initial) classes.push("initial");
    if (highlightStates.has(state.id)) classes.push("highlight");
    parts.push(
      `<g class="${classes.join(" ")}" transform="translate(${p.x},${p.y})">` +
        `<circle r="${NODE_RADIUS}"/>` +
        `<text text-anchor="middle" dy="4">${esc(String(state.id))}</text>` +
        `<title>${esc(valuationLabel(state))}</title></g>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}
