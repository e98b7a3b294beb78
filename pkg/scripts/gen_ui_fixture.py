#!/usr/bin/env python3
"""Record a full Tic-Tac-Toe match transcript from the live service app,
for the frontend's scripted match-flow test.

The human side plays a fixed deterministic policy (lowest-index legal
cell); the AI side is the service's own reply.  Every HTTP exchange is
recorded verbatim so the UI test can replay the same session through a
mocked fetch and compare rendered state digests.
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from ludelab.service import create_app


def main() -> None:
    client = TestClient(create_app())
    exchanges = []

    body = {"game": "Tic-Tac-Toe", "human_player": 1,
            "ai": {"iterations": 128, "seed": 12}}
    r = client.post("/matches", json=body)
    state = r.json()
    exchanges.append({
        "request": {"method": "POST", "path": "/matches", "body": body},
        "status": r.status_code,
        "response": state,
    })
    sid = state["id"]

    while state["status"] == "ongoing":
        move = state["legal_moves"][0]
        body = {"kind": move["kind"], "from": move["from"], "to": move["to"]}
        r = client.post(f"/matches/{sid}/moves", json=body)
        state = r.json()
        exchanges.append({
            "request": {"method": "POST", "path": f"/matches/{sid}/moves",
                        "body": body},
            "status": r.status_code,
            "response": state,
        })

    out = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" \
        / "ttt_transcript.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(exchanges, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} ({len(exchanges)} exchanges, final status "
          f"{state['status']}/{state['winner']})")


if __name__ == "__main__":
    sys.exit(main())
