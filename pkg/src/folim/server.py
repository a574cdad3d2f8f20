"""JSON-over-HTTP session service for the game playground.

Sessions live in an in-memory store with TTL eviction and per-session
locks; every game-rule decision happens here so clients can stay dumb.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import efgame, strategy
from .efgame import Position, partial_iso
from .graph import CapExceeded, Graph, GraphError, generate_hn, restricted_matrix, shadow
from .strategy import StrategyError

SESSION_TTL = 3600.0
ROUNDS_CAP = 5
MINIMAX_SIZE_CAP = efgame.SOLVER_SIZE_CAP
ENGINE_TIME_BUDGET = 10.0  # seconds per engine reply

ENGINES = ("minimax", "lm-key")
ROLES = ("spoiler", "duplicator")


class ApiError(Exception):
    def __init__(self, status: int, code: str, reason: str):
        self.status = status
        self.code = code
        self.reason = reason
        super().__init__(reason)


@dataclass
class Session:
    id: str
    left: Graph
    right: Graph
    rounds: int
    human: str
    engine: str
    seed: int
    pairs: tuple = ()
    transcript: list = field(default_factory=list)  # move dicts
    status: str = "active"
    winner: str | None = None
    reason: str = ""
    strategy_state: object = None
    created: float = field(default_factory=time.monotonic)
    touched: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def rounds_left(self) -> int:
        return self.rounds - len(self.transcript)

    def snapshot(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
            "engine": self.engine,
            "human": self.human,
            "rounds": self.rounds,
            "rounds_left": self.rounds_left,
            "pairs": [list(p) for p in self.pairs],
            "transcript": self.transcript,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }
        if self.status == "finished":
            out["winner"] = self.winner
            if self.reason:
                out["reason"] = self.reason
        return out


class SessionStore:
    def __init__(self, ttl: float = SESSION_TTL):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict(self) -> None:
        now = time.monotonic()
        dead = [k for k, s in self._sessions.items() if now - s.touched > self.ttl]
        for k in dead:
            del self._sessions[k]

    def add(self, session: Session) -> None:
        with self._lock:
            self._evict()
            self._sessions[session.id] = session

    def get(self, sid: str) -> Session:
        with self._lock:
            self._evict()
            s = self._sessions.get(sid)
            if s is None:
                raise ApiError(404, "not_found", f"unknown session {sid}")
            s.touched = time.monotonic()
            return s


def _parse_graph(spec) -> Graph:
    if isinstance(spec, dict):
        return Graph.from_json(spec)
    if isinstance(spec, str):
        if spec.startswith("hn:"):
            return generate_hn(int(spec[3:]))
        if spec.startswith("k") and spec[1:].isdigit():
            from .graph import complete_graph

            return complete_graph(int(spec[1:]))
    raise ApiError(400, "bad_graph", f"unrecognized graph spec {spec!r}")


def _engine_reply(s: Session, side: str, v: int) -> tuple[int, dict | None]:
    """Compute the duplicator engine's response to the spoiler move."""
    start = time.monotonic()
    if s.engine == "lm-key":
        try:
            resp, s.strategy_state, trace = strategy.respond(
                s.strategy_state, side, v, verify=True
            )
        except StrategyError as exc:
            raise ApiError(503, "engine", f"strategy failed: {exc}; retry on a valid instance")
        return resp, trace.to_json()
    pos = Position(s.left, s.right, s.pairs, s.rounds_left, pending=(side, v))
    try:
        resp = efgame.minimax_duplicator(pos, None)
    except CapExceeded as exc:
        raise ApiError(503, "engine", f"{exc}; retry with smaller graphs")
    if time.monotonic() - start > ENGINE_TIME_BUDGET:
        raise ApiError(503, "engine", "engine over time budget; retry with smaller graphs")
    return resp, None


def create_app(store: SessionStore | None = None) -> FastAPI:
    app = FastAPI(title="folim")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions = store or SessionStore()

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": exc.code, "reason": exc.reason},
        )

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict):
        engine = body.get("engine", "minimax")
        human = body.get("human", "spoiler")
        if engine not in ENGINES:
            raise ApiError(422, "bad_engine", f"engine must be one of {ENGINES}")
        if human not in ROLES:
            raise ApiError(422, "bad_role", f"human must be one of {ROLES}")
        try:
            rounds = int(body["rounds"])
            gl = _parse_graph(body["left"])
            gr = _parse_graph(body["right"])
        except ApiError:
            raise
        except (KeyError, ValueError, TypeError, GraphError) as exc:
            raise ApiError(422, "bad_request", str(exc))
        if rounds < 1 or rounds > ROUNDS_CAP:
            raise ApiError(413, "cap", f"rounds must be in 1..{ROUNDS_CAP}")
        if engine == "minimax" and gl.n * gr.n > MINIMAX_SIZE_CAP:
            raise ApiError(
                413, "cap", f"|G|*|H| = {gl.n * gr.n} exceeds minimax cap {MINIMAX_SIZE_CAP}"
            )
        s = Session(
            id=uuid.uuid4().hex,
            left=gl,
            right=gr,
            rounds=rounds,
            human=human,
            engine=engine,
            seed=int(body.get("seed", 0)),
        )
        if engine == "lm-key":
            if human != "spoiler":
                raise ApiError(422, "bad_role", "lm-key engine plays the duplicator")
            try:
                s.strategy_state = strategy.init_state(gl, gr, [], [], rounds)
            except StrategyError as exc:
                raise ApiError(400, exc.check, str(exc))
        sessions.add(s)
        return s.snapshot()

    @app.get("/sessions/{sid}")
    async def get_session(sid: str):
        return sessions.get(sid).snapshot()

    @app.post("/sessions/{sid}/move")
    async def submit_move(sid: str, body: dict):
        s = sessions.get(sid)
        with s.lock:
            try:
                side = body["side"]
                v = int(body["vertex"])
            except (KeyError, ValueError, TypeError) as exc:
                raise ApiError(422, "bad_request", str(exc))
            index = body.get("index", len(s.transcript))
            if not isinstance(index, int) or index < 0:
                raise ApiError(422, "bad_request", "index must be a nonnegative integer")
            if index < len(s.transcript):
                past = s.transcript[index]
                if past["side"] == side and past["vertex"] == v:
                    return {"move": past, "session": s.snapshot()}
                raise ApiError(409, "conflict", f"move {index} already played differently")
            if s.status != "active":
                raise ApiError(409, "finished", "session is finished")
            if index > len(s.transcript):
                raise ApiError(409, "conflict", f"expected move index {len(s.transcript)}")
            if side not in ("left", "right"):
                raise ApiError(422, "bad_move", "side must be left or right")
            g = s.left if side == "left" else s.right
            if not 0 <= v < g.n:
                raise ApiError(422, "bad_move", f"vertex {v} out of range for {side} graph")
            resp, trace = _engine_reply(s, side, v)
            pair = (v, resp) if side == "left" else (resp, v)
            s.pairs = s.pairs + (pair,)
            move = {
                "index": index,
                "round": index + 1,
                "side": side,
                "vertex": v,
                "response": resp,
            }
            if trace is not None:
                move["trace"] = trace
            s.transcript.append(move)
            if s.rounds_left == 0:
                s.status = "finished"
                s.winner = (
                    efgame.DUPLICATOR
                    if partial_iso(s.left, s.right, s.pairs)
                    else efgame.SPOILER
                )
            return {"move": move, "session": s.snapshot()}

    @app.get("/sessions/{sid}/analysis")
    async def get_analysis(sid: str):
        s = sessions.get(sid)
        with s.lock:
            played_l = [p[0] for p in s.pairs]
            played_r = [p[1] for p in s.pairs]
            p = max(s.rounds_left, 0)
            cap = 1 << p
            out: dict = {
                "matrices": {
                    "left": restricted_matrix(s.left, played_l).to_json()
                    if s.left.bipartite
                    else None,
                    "right": restricted_matrix(s.right, played_r).to_json()
                    if s.right.bipartite
                    else None,
                },
                "shadows": None,
                "verdict": None,
            }
            if s.left.bipartite and s.right.bipartite:
                sl = shadow(s.left, played_l, cap)
                sr = shadow(s.right, played_r, cap)
                from .graph import shadows_equal

                out["shadows"] = {
                    "cap": cap,
                    "left": sl.to_json(),
                    "right": sr.to_json(),
                    "equal": shadows_equal(sl, sr),
                }
            try:
                winner = efgame.solve(s.left, s.right, s.pairs, s.rounds_left)
                out["verdict"] = f"{winner} wins"
            except CapExceeded:
                out["verdict"] = None
                out["verdict_omitted"] = "cap"
            return out

    @app.get("/graphs/hn/{n}")
    async def get_hn(n: int):
        try:
            return generate_hn(n).to_json()
        except CapExceeded as exc:
            raise ApiError(413, "cap", str(exc))
        except GraphError as exc:
            raise ApiError(422, "bad_request", str(exc))

    return app
