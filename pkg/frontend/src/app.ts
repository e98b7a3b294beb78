// Page wiring: game picker, match lifecycle, quality viewer and the
// reconstruction explorer.  One in-flight mutation at a time: the board
// is disabled while a move is posted.

import { ApiError, LudelabClient, StatePayload } from "./api.js";
import { BoardView } from "./board.js";
import { ReconExplorer } from "./recon.js";

export class App {
  client: LudelabClient;
  board: BoardView | null = null;
  busy = false;

  constructor(private doc: Document, baseUrl = "") {
    this.client = new LudelabClient(baseUrl);
  }

  private el<T extends HTMLElement>(id: string): T {
    const node = this.doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  async start(): Promise<void> {
    const games = await this.client.listGames();
    const select = this.el<HTMLSelectElement>("game-select");
    select.textContent = "";
    for (const g of games.filter((g) => !g.partial)) {
      const opt = this.doc.createElement("option");
      opt.value = g.name;
      opt.textContent = `${g.name} (${g.region}, ${g.period})`;
      select.appendChild(opt);
    }
    this.el<HTMLButtonElement>("new-match").addEventListener("click", () => {
      void this.newMatch(select.value);
    });
    this.el<HTMLButtonElement>("eval-game").addEventListener("click", () => {
      void this.showEval(select.value);
    });
    const explorer = new ReconExplorer(this.client, (lud) => void this.playLud(lud));
    this.el<HTMLButtonElement>("recon-run").addEventListener("click", async () => {
      const text = this.el<HTMLTextAreaElement>("recon-spec").value;
      const status = this.el("recon-status");
      status.textContent = "running...";
      const { error } = await explorer.run(text);
      status.textContent = error ? `error: ${error}` : "done";
      explorer.renderTable(this.el("recon-table"));
    });
  }

  private async newMatch(name: string): Promise<void> {
    const state = await this.client.createMatch(name, { iterations: 256, seed: 1 });
    this.mountBoard(state);
  }

  private async playLud(lud: string): Promise<void> {
    const state = await this.client.createMatchFromLud(lud, { iterations: 256, seed: 1 });
    this.mountBoard(state);
  }

  private mountBoard(state: StatePayload): void {
    const root = this.el("board");
    this.board = new BoardView(root, state, {
      onMove: (move) => void this.submitMove(move),
    });
    this.el("match-status").textContent =
      `${state.game}: you are ${state.players[state.human_player - 1]}`;
  }

  private async submitMove(move: { kind: string; from: number | null; to: number }): Promise<void> {
    const board = this.board;
    if (!board || this.busy) return;
    this.busy = true;
    board.setBusy(true);
    try {
      const next = await this.client.postMove(board.state.id, move);
      board.update(next);
    } catch (exc) {
      if (exc instanceof ApiError && exc.status === 409) {
        const body = exc.body as { legal_moves?: unknown[] } | null;
        this.el("match-status").textContent =
          `illegal move; ${body?.legal_moves?.length ?? 0} legal moves highlighted`;
        board.render();
      } else {
        this.el("match-status").textContent = `error: ${(exc as Error).message}`;
      }
    } finally {
      this.busy = false;
      board.setBusy(false);
    }
  }

  private async showEval(name: string): Promise<void> {
    const panel = this.el("eval-panel");
    panel.textContent = "evaluating...";
    const report = await this.client.evalGame(name, { seed: 7, games: 60 });
    const flags = report.flags.length ? report.flags.join(", ") : "none";
    panel.textContent =
      `${report.game}: score ${report.score.toFixed(3)}, ` +
      `mean length ${report.mean_length.toFixed(1)}, ` +
      `advantage ${report.advantage.toFixed(2)}, ` +
      `draws ${report.draw_rate.toFixed(2)}, ` +
      `depth ${report.depth_proxy.toFixed(2)}, flags: ${flags}`;
  }
}

export function boot(doc: Document): App {
  const app = new App(doc, "");
  void app.start();
  return app;
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  boot(document);
}
