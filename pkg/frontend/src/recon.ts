// Reconstruction explorer: run a spec, show the ranked table, let the
// user edit slot candidates and re-run, or open a candidate as a match.

import type { LudelabClient, ReconCandidate, ReconResult } from "./api.js";

export interface ReconFormState {
  specText: string;
  error: string | null;
}

export function parseSpecForm(text: string): { spec?: unknown; error?: string } {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (exc) {
    return { error: `not valid JSON: ${(exc as Error).message}` };
  }
  if (typeof doc !== "object" || doc === null) return { error: "spec must be an object" };
  const record = doc as Record<string, unknown>;
  if (typeof record.fixed !== "string") return { error: "spec.fixed must be a .lud string" };
  if (!Array.isArray(record.slots) || record.slots.length === 0) {
    return { error: "spec.slots must be a non-empty array" };
  }
  for (const slot of record.slots) {
    const s = slot as Record<string, unknown>;
    if (!Array.isArray(s.path) || !Array.isArray(s.candidates) || s.candidates.length === 0) {
      return { error: "each slot needs a path and at least one candidate" };
    }
  }
  return { spec: doc };
}

export function rankedRows(result: ReconResult): ReconCandidate[] {
  // Service returns candidates sorted by score descending already;
  // keep a defensive sort so the table is stable regardless.
  return [...result.candidates].sort(
    (a, b) => b.score - a.score || a.canonical.localeCompare(b.canonical),
  );
}

export function describeCandidate(c: ReconCandidate): string {
  const flags = c.quality.flags.length ? ` [${c.quality.flags.join(", ")}]` : "";
  return `score ${c.score.toFixed(4)} (prior ${c.prior})${flags}`;
}

export class ReconExplorer {
  result: ReconResult | null = null;

  constructor(
    private client: LudelabClient,
    private onPlayCandidate: (lud: string) => void,
  ) {}

  async run(specText: string): Promise<{ error?: string; result?: ReconResult }> {
    const parsed = parseSpecForm(specText);
    if (parsed.error) return { error: parsed.error };  // no request sent
    try {
      this.result = await this.client.postRecon(parsed.spec);
      return { result: this.result };
    } catch (exc) {
      return { error: (exc as Error).message };
    }
  }

  renderTable(root: HTMLElement): void {
    root.textContent = "";
    if (!this.result) return;
    const table = document.createElement("table");
    table.className = "recon-table";
    const head = table.insertRow();
    for (const title of ["#", "candidate", "score", "prior", "flags", ""]) {
      const th = document.createElement("th");
      th.textContent = title;
      head.appendChild(th);
    }
    rankedRows(this.result).forEach((c, i) => {
      const row = table.insertRow();
      row.insertCell().textContent = String(i + 1);
      const lud = row.insertCell();
      lud.textContent = c.canonical;
      lud.className = "lud";
      row.insertCell().textContent = c.score.toFixed(4);
      row.insertCell().textContent = String(c.prior);
      row.insertCell().textContent = c.quality.flags.join(", ");
      const btn = document.createElement("button");
      btn.textContent = "play";
      btn.addEventListener("click", () => this.onPlayCandidate(c.description));
      row.insertCell().appendChild(btn);
    });
    root.appendChild(table);
  }
}
