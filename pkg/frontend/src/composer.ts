// The move composer: pick one classical move, or 2..w distinct components
// drawn from the listed legal ones. No rule re-derivation happens here; the
// only client-side checks are the component counts the widget itself needs.

import type { ClassicalMove, MovePayload } from "./types.js";

export interface ComposerState {
  width: number;
  selected: ClassicalMove[];
}

export function newComposer(width: number): ComposerState {
  return { width, selected: [] };
}

function sameMove(a: ClassicalMove, b: ClassicalMove): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

export function toggleComponent(state: ComposerState, move: ClassicalMove): ComposerState {
  const without = state.selected.filter((m) => !sameMove(m, move));
  if (without.length !== state.selected.length) {
    return { ...state, selected: without };
  }
  if (state.selected.length >= state.width) {
    return state; // the width bound is full; ignore further picks
  }
  return { ...state, selected: [...state.selected, move] };
}

export function clearComposer(state: ComposerState): ComposerState {
  return { ...state, selected: [] };
}

/** The payload to POST, or null while the selection is not submittable
 * (zero components, or a bare single pick meant to become quantum). */
export function composedMove(state: ComposerState,
                             asClassical: boolean): MovePayload | null {
  if (asClassical) {
    if (state.selected.length !== 1) return null;
    return { classical: state.selected[0] };
  }
  if (state.selected.length < 2 || state.selected.length > state.width) {
    return null;
  }
  return { quantum: state.selected };
}

export function selectionSummary(state: ComposerState): string {
  if (state.selected.length === 0) return "no components selected";
  const parts = state.selected.map((m) => JSON.stringify(m));
  return `⟨ ${parts.join(" | ")} ⟩ (${state.selected.length}/${state.width})`;
}
