// Thin typed client over the ludelab service HTTP API.

export interface MovePayload {
  kind: "add" | "step";
  from: number | null;
  to: number;
  player: number;
}

export interface CellPayload {
  id: number;
  x: number;
  y: number;
  occupant: number;
}

export interface StatePayload {
  id: string;
  game: string;
  players: string[];
  human_player: number;
  ai_player: number;
  mover: number;
  move_count: number;
  status: "ongoing" | "win" | "draw";
  winner: number | null;
  board: number[];
  cells: CellPayload[];
  legal_moves: MovePayload[];
  history: string[];
  hash: string;
  ai_move?: MovePayload;
}

export interface GameInfo {
  name: string;
  region: string;
  earliest_date: number;
  period: string;
  partial: boolean;
}

export interface QualityPayload {
  game: string;
  mean_length: number;
  length_cap_rate: number;
  advantage: number;
  draw_rate: number;
  depth_proxy: number;
  flags: string[];
  score: number;
}

export interface ReconCandidate {
  description: string;
  canonical: string;
  prior: number;
  score: number;
  quality: QualityPayload;
}

export interface ReconResult {
  total: number;
  offset: number;
  candidates: ReconCandidate[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string, public body: unknown) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(base + path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await res.json().catch(() => null);
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "error" in (body as object)
        ? String((body as { error: unknown }).error)
        : `HTTP ${res.status}`;
    throw new ApiError(res.status, detail, body);
  }
  return body as T;
}

export class LudelabClient {
  constructor(public base: string = "") {}

  listGames(): Promise<GameInfo[]> {
    return request(this.base, "/games");
  }

  createMatch(game: string, opts?: { humanPlayer?: number; iterations?: number; seed?: number }): Promise<StatePayload> {
    return request(this.base, "/matches", {
      method: "POST",
      body: JSON.stringify({
        game,
        human_player: opts?.humanPlayer ?? 1,
        ai: { iterations: opts?.iterations ?? 256, seed: opts?.seed ?? 0 },
      }),
    });
  }

  createMatchFromLud(lud: string, opts?: { humanPlayer?: number; iterations?: number; seed?: number }): Promise<StatePayload> {
    return request(this.base, "/matches", {
      method: "POST",
      body: JSON.stringify({
        lud,
        human_player: opts?.humanPlayer ?? 1,
        ai: { iterations: opts?.iterations ?? 256, seed: opts?.seed ?? 0 },
      }),
    });
  }

  getMatch(id: string): Promise<StatePayload> {
    return request(this.base, `/matches/${id}`);
  }

  postMove(id: string, move: { kind: string; from: number | null; to: number }): Promise<StatePayload> {
    return request(this.base, `/matches/${id}/moves`, {
      method: "POST",
      body: JSON.stringify(move),
    });
  }

  evalGame(name: string, opts?: { seed?: number; games?: number }): Promise<QualityPayload> {
    const seed = opts?.seed ?? 0;
    const games = opts?.games ?? 100;
    return request(this.base, `/games/${name}/eval?seed=${seed}&games=${games}&ladder=4,8&ladder_games=4`);
  }

  postRecon(spec: unknown, offset = 0, limit = 50): Promise<ReconResult> {
    return request(this.base, `/recon?offset=${offset}&limit=${limit}`, {
      method: "POST",
      body: JSON.stringify(spec),
    });
  }
}
