// Pure view-model logic: which cells are clickable, how clicks turn
// into moves (single-click for add games, two-click from/to for step
// games), and the rendered-state digest used by the parity tests.
// All rules knowledge stays server-side; this file only maps payloads.

import type { MovePayload, StatePayload } from "./api.js";

export interface CellView {
  id: number;
  x: number;
  y: number;
  occupant: number;
  clickable: boolean;
  selected: boolean;
}

export type PendingMove = { kind: string; from: number | null; to: number };

export class MoveSelector {
  /** Tracks the two-click state for step games. */
  selectedFrom: number | null = null;

  constructor(public state: StatePayload) {}

  humanMoves(): MovePayload[] {
    if (this.state.status !== "ongoing" || this.state.mover !== this.state.human_player) {
      return [];
    }
    return this.state.legal_moves;
  }

  clickableCells(): Set<number> {
    const moves = this.humanMoves();
    const out = new Set<number>();
    for (const m of moves) {
      if (m.kind === "add") {
        out.add(m.to);
      } else if (this.selectedFrom === null) {
        if (m.from !== null) out.add(m.from);
      } else if (m.from === this.selectedFrom) {
        out.add(m.to);
      }
    }
    if (this.selectedFrom !== null) out.add(this.selectedFrom); // allow deselect
    return out;
  }

  /** Returns a move to post, or null when the click only updates selection. */
  click(cell: number): PendingMove | null {
    const moves = this.humanMoves();
    if (!moves.length) return null;
    const kind = moves[0].kind;
    if (kind === "add") {
      return moves.some((m) => m.to === cell) ? { kind, from: null, to: cell } : null;
    }
    if (this.selectedFrom === null) {
      if (moves.some((m) => m.from === cell)) this.selectedFrom = cell;
      return null;
    }
    if (cell === this.selectedFrom) {
      this.selectedFrom = null; // deselect
      return null;
    }
    if (moves.some((m) => m.from === this.selectedFrom && m.to === cell)) {
      const from = this.selectedFrom;
      this.selectedFrom = null;
      return { kind, from, to: cell };
    }
    if (moves.some((m) => m.from === cell)) this.selectedFrom = cell; // reselect
    return null;
  }
}

export function cellViews(state: StatePayload, selector: MoveSelector): CellView[] {
  const clickable = selector.clickableCells();
  return state.cells.map((c) => ({
    id: c.id,
    x: c.x,
    y: c.y,
    occupant: state.board[c.id],
    clickable: clickable.has(c.id),
    selected: selector.selectedFrom === c.id,
  }));
}

export function outcomeBanner(state: StatePayload): string | null {
  if (state.status === "ongoing") return null;
  if (state.status === "draw") return "Draw";
  const name = state.players[(state.winner ?? 1) - 1];
  const who = state.winner === state.human_player ? "You win" : "AI wins";
  return `${who} (${name})`;
}

/** Canonical digest of what the board renders; equals the digest of the
 * service payload exactly when the UI shows the service state. */
export function renderedDigest(views: CellView[], state: StatePayload): string {
  const cells = views.map((v) => `${v.id}:${v.occupant}`).join(",");
  return `${state.game}|${cells}|${state.mover}|${state.status}|${state.winner ?? 0}`;
}

export function serviceDigest(state: StatePayload): string {
  const cells = state.cells.map((c) => `${c.id}:${state.board[c.id]}`).join(",");
  return `${state.game}|${cells}|${state.mover}|${state.status}|${state.winner ?? 0}`;
}
