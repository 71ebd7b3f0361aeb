// DOM glue: wires the pure view modules to the page, polls the session at
// turn-based cadence, and keeps exactly one mutation in flight.

import { analyze, ApiError, createGame, getState, listMoves, postMove, undo } from "./api.js";
import { buildCards, collapsedRealizations, InstanceHints } from "./cards.js";
import { clearComposer, composedMove, newComposer, selectionSummary, toggleComponent } from "./composer.js";
import type { ClassicalMove, MovePayload, StateView } from "./types.js";

const POLL_MS = 1000;

interface AppState {
  view: StateView | null;
  hints: InstanceHints;
  composer: ReturnType<typeof newComposer>;
  mutationInFlight: boolean;
  uiPage: number;
  history: string[];
  lastCollapsed: string[];
}

const app: AppState = {
  view: null,
  hints: {},
  composer: newComposer(2),
  mutationInFlight: false,
  uiPage: 0,
  history: [],
  lastCollapsed: [],
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function toast(message: string) {
  const box = el<HTMLDivElement>("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

function renderCards() {
  const view = app.view;
  if (!view) return;
  const page = buildCards(view, app.uiPage, app.hints);
  const host = el<HTMLDivElement>("cards");
  host.innerHTML = "";
  for (const card of page.cards) {
    const node = document.createElement("div");
    node.className = "card";
    if (app.lastCollapsed.length === 0) node.classList.add("arrived");
    const title = document.createElement("h4");
    title.textContent = card.label;
    node.appendChild(title);
    if (card.body.kind === "piles" && card.body.bars) {
      for (const bar of card.body.bars) {
        const row = document.createElement("div");
        row.className = "pile-row";
        const label = document.createElement("span");
        label.textContent = `pile ${bar.pile}`;
        const fill = document.createElement("span");
        fill.className = "pile-bar";
        fill.style.width = `${bar.size * 22}px`;
        fill.textContent = String(bar.size);
        row.append(label, fill);
        node.appendChild(row);
      }
    } else if (card.body.kind === "graph" && card.body.drawing) {
      const wrap = document.createElement("div");
      wrap.className = "graph";
      wrap.innerHTML = card.body.drawing.svg;
      node.appendChild(wrap);
    } else if (card.body.rows) {
      const table = document.createElement("table");
      for (const rowData of card.body.rows) {
        const tr = document.createElement("tr");
        for (const cell of rowData) {
          const td = document.createElement("td");
          td.textContent = cell;
          tr.appendChild(td);
        }
        table.appendChild(tr);
      }
      node.appendChild(table);
    }
    host.appendChild(node);
  }
  el<HTMLSpanElement>("pager").textContent = page.pageLabel;
  if (app.lastCollapsed.length) {
    toast(`${app.lastCollapsed.length} realization(s) collapsed`);
    app.lastCollapsed = [];
  }
}

async function renderMoves() {
  const view = app.view;
  if (!view) return;
  const [classical, quantum] = await Promise.all([
    listMoves(view.id, "classical"),
    listMoves(view.id, "quantum"),
  ]);
  const host = el<HTMLDivElement>("moves");
  host.innerHTML = "";
  const heading = document.createElement("p");
  heading.textContent =
    `legal components — classical: ${classical.total}, quantum pairs: ${quantum.total}`;
  host.appendChild(heading);
  for (const move of classical.moves) {
    const payload = (move as { classical: ClassicalMove }).classical;
    const button = document.createElement("button");
    button.className = "component";
    button.textContent = JSON.stringify(payload);
    const selected = app.composer.selected.some(
      (m) => JSON.stringify(m) === JSON.stringify(payload));
    if (selected) button.classList.add("selected");
    button.onclick = () => {
      app.composer = toggleComponent(app.composer, payload);
      el<HTMLSpanElement>("selection").textContent = selectionSummary(app.composer);
      renderMoves();
    };
    host.appendChild(button);
  }
}

function renderStatus() {
  const view = app.view;
  if (!view) return;
  const mover = view.to_move === "L" ? "Left" : "Right";
  const bits = [
    `ruleset: ${view.ruleset}`,
    `flavor: ${view.config.flavor}`,
    `width ≤ ${view.config.width}`,
    `to move: ${mover}`,
    view.terminal ? `game over — ${mover} has no move` : "in play",
  ];
  if (view.budgets.left !== null || view.budgets.right !== null) {
    bits.push(`budgets L/R: ${view.budgets.left ?? "∞"}/${view.budgets.right ?? "∞"}`);
  }
  el<HTMLDivElement>("status").textContent = bits.join(" · ");
  el<HTMLDivElement>("history").textContent =
    app.history.length ? app.history.join("  →  ") : "(no moves yet)";
  el<HTMLButtonElement>("submit-quantum").disabled =
    app.mutationInFlight || view.terminal;
  el<HTMLButtonElement>("submit-classical").disabled =
    app.mutationInFlight || view.terminal;
}

function describeMove(move: MovePayload): string {
  if ("classical" in move) return JSON.stringify(move.classical);
  return `⟨ ${move.quantum.map((m) => JSON.stringify(m)).join(" | ")} ⟩`;
}

async function refresh(full = true) {
  const view = app.view;
  if (!view) return;
  app.view = await getState(view.id, view.realization_page);
  renderCards();
  renderStatus();
  if (full) await renderMoves();
}

async function submit(asClassical: boolean) {
  const view = app.view;
  if (!view || app.mutationInFlight) return;
  const move = composedMove(app.composer, asClassical);
  if (!move) {
    toast(asClassical
      ? "pick exactly one component for a classical move"
      : `pick 2..${app.composer.width} distinct components`);
    return;
  }
  app.mutationInFlight = true;
  renderStatus();
  try {
    const before = view;
    const after = await postMove(view.id, move);
    app.history.push(describeMove(move));
    if (after.engine) {
      const badge = after.engine.unsolved ? " (unsolved)" : "";
      app.history.push(`engine: ${describeMove(after.engine.move)}${badge}`);
      el<HTMLDivElement>("engine").textContent =
        `engine played ${describeMove(after.engine.move)}${badge} via ${after.engine.strategy}`;
    }
    app.lastCollapsed = collapsedRealizations(before, after);
    app.view = after;
    app.composer = clearComposer(app.composer);
    el<HTMLSpanElement>("selection").textContent = selectionSummary(app.composer);
    renderCards();
    renderStatus();
    await renderMoves();
  } catch (error) {
    if (error instanceof ApiError) {
      toast(error.reason); // the flavor-specific reason, verbatim
    } else {
      toast(String(error));
    }
  } finally {
    app.mutationInFlight = false;
    renderStatus();
  }
}

async function refreshAnalysis() {
  const view = app.view;
  if (!view) return;
  const host = el<HTMLDivElement>("analysis");
  host.textContent = "analyzing…";
  const result = await analyze(view.id);
  if (result.status === "exceeded") {
    host.textContent = "unknown within budget";
    return;
  }
  const best = result.best ? ` · best: ${describeMove(result.best)}` : "";
  host.textContent = `outcome: ${result.outcome}${best} · nodes: ${result.nodes}`;
}

function instanceFromForm(): { instance: unknown; hints: InstanceHints } {
  const text = el<HTMLTextAreaElement>("instance-json").value;
  const instance = JSON.parse(text) as Record<string, unknown>;
  const hints: InstanceHints = {};
  if (Array.isArray(instance.vertices)) {
    hints.vertices = instance.vertices as string[];
    hints.edges = (instance.edges ?? []) as [string, string][];
  }
  return { instance, hints };
}

export async function startGame() {
  try {
    const { instance, hints } = instanceFromForm();
    const config = {
      flavor: el<HTMLSelectElement>("flavor").value,
      width: Number(el<HTMLInputElement>("width").value) || 2,
    };
    const engine = el<HTMLSelectElement>("engine-role").value || null;
    const view = await createGame(instance, config, engine);
    app.view = view;
    app.hints = hints;
    app.composer = newComposer(config.width);
    app.history = [];
    app.uiPage = 0;
    if (view.engine) {
      const badge = view.engine.unsolved ? " (unsolved)" : "";
      app.history.push(`engine: ${describeMove(view.engine.move)}${badge}`);
    }
    el<HTMLSpanElement>("selection").textContent = selectionSummary(app.composer);
    el<HTMLDivElement>("analysis").textContent = "";
    el<HTMLDivElement>("engine").textContent = "";
    renderCards();
    renderStatus();
    await renderMoves();
  } catch (error) {
    toast(error instanceof ApiError ? error.reason : String(error));
  }
}

export function wire() {
  el<HTMLButtonElement>("start").onclick = () => void startGame();
  el<HTMLButtonElement>("submit-quantum").onclick = () => void submit(false);
  el<HTMLButtonElement>("submit-classical").onclick = () => void submit(true);
  el<HTMLButtonElement>("undo").onclick = async () => {
    const view = app.view;
    if (!view) return;
    try {
      app.view = await undo(view.id);
      app.history.pop();
      renderCards();
      renderStatus();
      await renderMoves();
    } catch (error) {
      toast(error instanceof ApiError ? error.reason : String(error));
    }
  };
  el<HTMLButtonElement>("analyze").onclick = () => void refreshAnalysis();
  el<HTMLButtonElement>("page-next").onclick = () => {
    app.uiPage += 1;
    renderCards();
  };
  el<HTMLButtonElement>("page-prev").onclick = () => {
    app.uiPage = Math.max(0, app.uiPage - 1);
    renderCards();
  };
  setInterval(() => {
    if (app.view && !app.mutationInFlight) void refresh(false);
  }, POLL_MS);
}
