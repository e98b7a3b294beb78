"""HTTP/JSON facade over the engine, AI, quality and reconstruction
modules, used by the web UI for interactive matches and what-if
reconstruction runs.

Sessions are in-memory with a 1-hour TTL; per-session mutations are
serialized by a lock; pure queries return exactly what the CLI would
print for the same seeds.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import recon as recon_mod
from .corpus import load_corpus
from .errors import IllegalMove, LudelabError
from .game import compile_game
from .mcts import SearchConfig, choose_move
from .quality import TrialSpec, evaluate
from .state import Move, derive_seed

SESSION_TTL_SECONDS = 3600
DEFAULT_RECON_BUDGET = 64


@dataclass
class MatchSession:
    id: str
    game_name: str
    game: object
    state: object
    ai_config: SearchConfig
    ai_seat: int
    history: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)

    def check_replay(self):
        replayed = self.game.replay(self.history)
        assert replayed.hash == self.state.hash, "history does not replay to state"


def _move_payload(m: Move) -> dict:
    return {"kind": m.kind, "from": None if m.frm < 0 else m.frm,
            "to": m.to, "player": m.player}


def _state_payload(session: MatchSession) -> dict:
    game, s = session.game, session.state
    out = game.status(s)
    legal = [] if out.is_terminal else game.legal_moves(s)
    return {
        "id": session.id,
        "game": session.game_name,
        "players": list(game.player_names),
        "human_player": 3 - session.ai_seat,
        "ai_player": session.ai_seat,
        "mover": s.mover,
        "move_count": s.move_count,
        "status": out.status,
        "winner": out.winner,
        "board": list(s.board),
        "cells": [
            {"id": i, "x": x, "y": y, "occupant": s.board[i]}
            for i, (x, y) in enumerate(game.board.layout)
        ],
        "legal_moves": [_move_payload(m) for m in legal],
        "history": list(session.history),
        "hash": f"{s.hash:016x}",
    }


def _parse_ai_config(doc: dict | None) -> SearchConfig:
    doc = doc or {}
    return SearchConfig(
        iterations=int(doc.get("iterations", 256)),
        exploration_c=float(doc.get("exploration_c", 0.7)),
        rng_seed=int(doc.get("seed", 0)),
    )


def create_app(corpus_dir=None, recon_budget: int = DEFAULT_RECON_BUDGET,
               ui_dir=None) -> FastAPI:
    app = FastAPI(title="ludelab service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])
    entries = {e.name: e for e in load_corpus(corpus_dir)}
    sessions: dict[str, MatchSession] = {}
    sessions_lock = threading.Lock()

    def _sweep_sessions():
        now = time.monotonic()
        with sessions_lock:
            dead = [sid for sid, s in sessions.items()
                    if now - s.last_access > SESSION_TTL_SECONDS]
            for sid in dead:
                del sessions[sid]

    def _get_session(sid: str) -> MatchSession:
        _sweep_sessions()
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(404, f"no such match {sid}")
        session.last_access = time.monotonic()
        return session

    def _ai_reply(session: MatchSession):
        game, s = session.game, session.state
        if game.status(s).is_terminal or s.mover != session.ai_seat:
            return None
        seed = derive_seed(session.ai_config.rng_seed, s.move_count)
        m = choose_move(game, s, session.ai_config.with_seed(seed))
        session.state = game.apply(s, m)
        session.history.append(m.to_line())
        session.check_replay()
        return m

    @app.exception_handler(LudelabError)
    async def _domain_error(request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/games")
    def games():
        return [
            {
                **e.metadata.to_dict(),
                "partial": e.is_partial,
                "cells": None,
            }
            for e in entries.values()
        ]

    @app.get("/games/{name}/eval")
    def eval_game(name: str, seed: int = Query(0), games: int = Query(200),
                  agent: str = Query("uniform"), ladder: str = Query("16,64"),
                  ladder_games: int = Query(32)):
        entry = entries.get(name)
        if entry is None:
            raise HTTPException(404, f"unknown game {name!r}")
        if entry.is_partial:
            raise HTTPException(400, f"{name} is an equipment-only stub")
        game = compile_game(entry.description)
        cfg = recon_mod.parse_agent(agent)
        spec = TrialSpec(num_games=games, agent_a=cfg, agent_b=cfg, base_seed=seed)
        rungs = [SearchConfig(int(n)) for n in ladder.split(",") if n]
        report = evaluate(game, spec, rungs, ladder_games=ladder_games)
        return report.to_dict()

    @app.post("/matches", status_code=201)
    def create_match(body: dict = Body(default={})):
        if "lud" in body:
            # ad-hoc description, e.g. a reconstruction candidate
            from .sexpr import parse
            from .validate import validate
            description = validate(parse(str(body["lud"])))
            name = description.name
        else:
            name = body.get("game")
            entry = entries.get(name)
            if entry is None:
                raise HTTPException(404, f"unknown game {name!r}")
            if entry.is_partial:
                raise HTTPException(400, f"{name} is an equipment-only stub")
            description = entry.description
        human = int(body.get("human_player", 1))
        if human not in (1, 2):
            raise HTTPException(400, "human_player must be 1 or 2")
        game = compile_game(description)
        session = MatchSession(
            id=uuid.uuid4().hex,
            game_name=name,
            game=game,
            state=game.initial_state(),
            ai_config=_parse_ai_config(body.get("ai")),
            ai_seat=3 - human,
        )
        with sessions_lock:
            sessions[session.id] = session
        with session.lock:
            ai_move = _ai_reply(session)
            payload = _state_payload(session)
        if ai_move is not None:
            payload["ai_move"] = _move_payload(ai_move)
        return payload

    @app.get("/matches/{sid}")
    def get_match(sid: str):
        session = _get_session(sid)
        with session.lock:
            return _state_payload(session)

    @app.post("/matches/{sid}/moves")
    def post_move(sid: str, body: dict = Body(...)):
        session = _get_session(sid)
        with session.lock:
            game, s = session.game, session.state
            if game.status(s).is_terminal:
                raise HTTPException(409, "match already finished")
            frm = body.get("from")
            move = Move(body.get("kind", "add"),
                        -1 if frm is None else int(frm),
                        int(body["to"]), s.mover)
            try:
                session.state = game.apply(s, move)
            except IllegalMove:
                return JSONResponse(status_code=409, content={
                    "error": "illegal move",
                    "legal_moves": [_move_payload(m) for m in game.legal_moves(s)],
                })
            session.history.append(move.to_line())
            session.check_replay()
            ai_move = _ai_reply(session)
            payload = _state_payload(session)
        if ai_move is not None:
            payload["ai_move"] = _move_payload(ai_move)
        return payload

    @app.post("/recon")
    def recon(body: dict = Body(...), offset: int = Query(0), limit: int = Query(50)):
        import json as _json
        try:
            spec = recon_mod.spec_from_json(_json.dumps(body))
        except LudelabError as exc:
            raise HTTPException(400, str(exc))
        except (KeyError, ValueError, TypeError) as exc:
            raise HTTPException(400, f"invalid reconstruction spec: {exc}")
        total = recon_mod.candidate_count(spec)
        if total > recon_budget:
            raise HTTPException(413, f"candidate space {total} exceeds server budget "
                                     f"{recon_budget}")
        ranked = recon_mod.reconstruct(spec)
        page = ranked[offset:offset + limit]
        return {
            "total": len(ranked),
            "offset": offset,
            "candidates": [c.to_dict() for c in page],
        }

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
