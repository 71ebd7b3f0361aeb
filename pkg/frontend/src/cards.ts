// Realization cards: a pure projection of a state payload into renderable
// card data. The DOM layer turns these into elements; the contract tests
// assert the card list mirrors the payload exactly.

import type { Realization, StateView } from "./types.js";

export const CARD_CAP = 64;

export interface PileBar {
  pile: number;
  size: number;
}

export interface GraphDrawing {
  svg: string;
}

export interface CardBody {
  kind: "piles" | "graph" | "table";
  bars?: PileBar[];
  drawing?: GraphDrawing;
  rows?: string[][];
}

export interface RealizationCard {
  index: number;
  label: string;
  realization: Realization;
  collapsedNext?: boolean;
  body: CardBody;
}

export interface CardPage {
  cards: RealizationCard[];
  shown: number;
  total: number;
  pageLabel: string;
}

function hashString(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

/** Deterministic circular layout; the rotation is seeded by the vertex set,
 * so screenshots of the same instance always match. */
export function graphLayout(vertices: string[]): Map<string, { x: number; y: number }> {
  const seed = hashString(vertices.join("|"));
  const offset = (seed % 360) * (Math.PI / 180);
  const layout = new Map<string, { x: number; y: number }>();
  const n = Math.max(vertices.length, 1);
  vertices.forEach((name, i) => {
    const angle = offset + (2 * Math.PI * i) / n;
    layout.set(name, {
      x: 60 + 48 * Math.cos(angle),
      y: 60 + 48 * Math.sin(angle),
    });
  });
  return layout;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function graphSvg(
  vertices: string[],
  edges: [string, string][],
  marks: Map<string, string>,
): string {
  const layout = graphLayout(vertices);
  const parts: string[] = [
    `<svg viewBox="0 0 120 120" xmlns="http://www.w3.org/2000/svg">`,
  ];
  for (const [u, v] of edges) {
    const a = layout.get(u);
    const b = layout.get(v);
    if (!a || !b) continue;
    parts.push(
      `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
      `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" class="edge"/>`,
    );
  }
  for (const name of vertices) {
    const p = layout.get(name)!;
    const mark = marks.get(name) ?? "plain";
    parts.push(
      `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="9" class="v ${mark}"/>`,
      `<text x="${p.x.toFixed(1)}" y="${(p.y + 3).toFixed(1)}" class="vlabel">` +
      `${esc(name)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

function nimBody(realization: number[]): CardBody {
  return {
    kind: "piles",
    bars: realization.map((size, pile) => ({ pile, size })),
  };
}

function geographyBody(r: { edges: [string, string][]; token: string; visited: string[] }): CardBody {
  const vertices = Array.from(
    new Set<string>([...r.visited, ...r.edges.flat(), r.token]),
  ).sort();
  const marks = new Map<string, string>();
  for (const v of r.visited) marks.set(v, "visited");
  marks.set(r.token, "token");
  return { kind: "graph", drawing: { svg: graphSvg(vertices, r.edges, marks) } };
}

function kaylesBody(r: { occupied: string[]; colors?: Record<string, string> },
                    instanceVertices: string[],
                    instanceEdges: [string, string][]): CardBody {
  const marks = new Map<string, string>();
  for (const v of r.occupied) marks.set(v, r.colors?.[v] ?? "occupied");
  return {
    kind: "graph",
    drawing: { svg: graphSvg(instanceVertices, instanceEdges, marks) },
  };
}

function avoidTrueBody(r: { free: string[] }): CardBody {
  return { kind: "table", rows: [["free", r.free.join(" ")]] };
}

function qbfBody(r: { assignment: Record<string, boolean> }): CardBody {
  const rows = Object.entries(r.assignment)
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(([name, value]) => [name, value ? "true" : "false"]);
  return { kind: "table", rows: rows.length ? rows : [["(no assignments)", ""]] };
}

export interface InstanceHints {
  vertices?: string[];
  edges?: [string, string][];
}

export function cardFor(ruleset: string, index: number, realization: Realization,
                        hints: InstanceHints = {}): RealizationCard {
  let body: CardBody;
  switch (ruleset) {
    case "nim":
      body = nimBody(realization as number[]);
      break;
    case "geography":
      body = geographyBody(realization as never);
      break;
    case "node_kayles":
      body = kaylesBody(realization as never, hints.vertices ?? [],
                        hints.edges ?? []);
      break;
    case "avoid_true":
      body = avoidTrueBody(realization as never);
      break;
    default:
      body = qbfBody(realization as never);
  }
  return {
    index,
    label: `realization ${index + 1}`,
    realization,
    body,
  };
}

/** Cards for one screen: capped at CARD_CAP with a "showing k of s" pager
 * mirroring the API's own pagination. */
export function buildCards(view: StateView, uiPage = 0,
                           hints: InstanceHints = {}): CardPage {
  const baseIndex = view.realization_page * 512 + uiPage * CARD_CAP;
  const window = view.realizations.slice(uiPage * CARD_CAP,
                                         (uiPage + 1) * CARD_CAP);
  const cards = window.map((realization, i) =>
    cardFor(view.ruleset, baseIndex + i, realization, hints));
  return {
    cards,
    shown: cards.length,
    total: view.width,
    pageLabel: `showing ${cards.length} of ${view.width}`,
  };
}

/** Keys of realizations that were present before a move and absent after:
 * those are the collapses to animate. */
export function collapsedRealizations(before: StateView, after: StateView): string[] {
  const keep = new Set(after.realizations.map((r) => JSON.stringify(r)));
  return before.realizations
    .map((r) => JSON.stringify(r))
    .filter((key) => !keep.has(key));
}
