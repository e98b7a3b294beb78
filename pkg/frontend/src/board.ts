// SVG board rendering: one circle per cell positioned by the service's
// layout coordinates, clicks forwarded to the move selector.

import type { StatePayload } from "./api.js";
import { CellView, MoveSelector, cellViews, outcomeBanner } from "./model.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PLAYER_FILL = ["#f8f8f2", "#f8f8f2", "#2b2b2b"];
const CELL_RADIUS = 0.34;

export interface BoardCallbacks {
  onMove(move: { kind: string; from: number | null; to: number }): void;
}

export class BoardView {
  selector: MoveSelector;

  constructor(
    private root: HTMLElement,
    public state: StatePayload,
    private callbacks: BoardCallbacks,
  ) {
    this.selector = new MoveSelector(state);
    this.render();
  }

  update(state: StatePayload): void {
    this.state = state;
    this.selector = new MoveSelector(state);
    this.render();
  }

  setBusy(busy: boolean): void {
    this.root.classList.toggle("busy", busy);
  }

  views(): CellView[] {
    return cellViews(this.state, this.selector);
  }

  render(): void {
    this.root.textContent = "";
    const views = this.views();
    const xs = views.map((v) => v.x);
    const ys = views.map((v) => v.y);
    const pad = 0.8;
    const minX = Math.min(...xs) - pad;
    const minY = Math.min(...ys) - pad;
    const w = Math.max(...xs) - minX + pad;
    const h = Math.max(...ys) - minY + pad;

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `${minX} ${minY} ${w} ${h}`);
    svg.setAttribute("class", "board-svg");

    for (const v of views) {
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(v.x));
      circle.setAttribute("cy", String(v.y));
      circle.setAttribute("r", String(CELL_RADIUS));
      const classes = ["cell"];
      if (v.occupant) classes.push(`occ-${v.occupant}`);
      if (v.clickable) classes.push("clickable");
      if (v.selected) classes.push("selected");
      circle.setAttribute("class", classes.join(" "));
      if (v.occupant) circle.setAttribute("fill", PLAYER_FILL[v.occupant]);
      circle.dataset.cell = String(v.id);
      if (v.clickable) {
        circle.addEventListener("click", () => this.handleClick(v.id));
      }
      svg.appendChild(circle);
    }
    this.root.appendChild(svg);

    const banner = outcomeBanner(this.state);
    if (banner) {
      const div = document.createElement("div");
      div.className = "banner";
      div.textContent = banner;
      this.root.appendChild(div);
    }
  }

  handleClick(cell: number): void {
    const move = this.selector.click(cell);
    if (move) {
      this.callbacks.onMove(move);
    } else {
      this.render(); // selection highlight changed
    }
  }
}
