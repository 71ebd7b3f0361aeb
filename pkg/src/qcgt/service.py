"""Stateful game-session API over HTTP/JSON.

Sessions live in memory behind per-session locks; an optional JSON snapshot
file persists them across restarts (history is replayed on load).  The
engine, when seated, replies synchronously within a time budget: the hero
strategy for undirected-geography sessions it wins classically, exhaustive
search otherwise, and the canonically smallest legal move (flagged
"unsolved") when the budget runs out.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .core import (
    GameConfig,
    GameState,
    IllegalMoveError,
    Move,
    MoveRecord,
    Player,
    apply_move,
    bft,
    canonical_key,
    initial_state,
    legal_classical_moves,
    legal_quantum_moves,
    move_from_json,
    move_key,
    move_to_json,
)
from .geography_strategy import HeroSession, hero_first_move, hero_respond, new_session
from .rulesets import InvalidInstanceError, instance_from_json
from .rulesets.geography import GeographyRuleset
from .solver import ResourceExceededError, SolveLimits, solve

REALIZATION_PAGE = 512
MAX_MOVE_PAGE = 200
MOVE_COUNT_LIMIT = 10_000


class ApiError(Exception):
    def __init__(self, status: int, code: str, reason: str):
        super().__init__(reason)
        self.status = status
        self.code = code
        self.reason = reason


@dataclass
class Session:
    id: str
    ruleset: Any
    config: GameConfig
    state: GameState
    engine_role: Optional[Player] = None
    history: list = field(default_factory=list)  # (MoveRecord, prior state digest)
    hero: Optional[HeroSession] = None
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _player_from_json(value) -> Optional[Player]:
    if value in (None, ""):
        return None
    text = str(value).strip().lower()
    if text in ("l", "left", "true", "blue"):
        return Player.LEFT
    if text in ("r", "right", "false", "red"):
        return Player.RIGHT
    raise ApiError(400, "SchemaError", f"unknown player {value!r}")


def _try_hero(session: Session) -> Optional[HeroSession]:
    """A hero session when the engine can play the matching strategy: an
    undirected-geography classical start under flavor D width 2, with the
    engine seated as the classical winner."""
    ruleset = session.ruleset
    if session.engine_role is None or not isinstance(ruleset, GeographyRuleset):
        return None
    try:
        hero = new_session(ruleset, session.config)
    except ValueError:
        return None
    return hero if hero.hero is session.engine_role else None


def _legal_moves_list(state: GameState) -> list:
    return list(legal_classical_moves(state)) + list(legal_quantum_moves(state))


class SessionStore:
    def __init__(self, snapshot_path: Optional[Path] = None,
                 engine_seconds: float = 5.0, check_replay: bool = False):
        self.sessions: dict[str, Session] = {}
        self.snapshot_path = Path(snapshot_path) if snapshot_path else None
        self.engine_seconds = engine_seconds
        self.check_replay = check_replay
        self._lock = threading.Lock()
        self._loaded = False

    # -- persistence -------------------------------------------------------

    def _ensure_loaded(self):
        if self._loaded:
            return
        self._loaded = True
        if not self.snapshot_path or not self.snapshot_path.exists():
            return
        data = json.loads(self.snapshot_path.read_text())
        for entry in data.get("sessions", []):
            try:
                session = self._rebuild(entry)
            except Exception:
                continue  # a corrupt snapshot entry never blocks startup
            self.sessions[session.id] = session

    def _rebuild(self, entry: dict) -> Session:
        ruleset = instance_from_json(entry["instance"])
        config = GameConfig.from_json(entry["config"])
        session = Session(id=entry["id"], ruleset=ruleset, config=config,
                          state=initial_state(ruleset, config),
                          engine_role=_player_from_json(entry.get("engine_role")),
                          created=entry.get("created", time.time()))
        for move_json in entry.get("history", []):
            self._advance(session, move_from_json(ruleset, move_json))
        self._rebuild_hero(session)
        return session

    def save_snapshot(self):
        if not self.snapshot_path:
            return
        doc = {"sessions": []}
        for session in self.sessions.values():
            doc["sessions"].append({
                "id": session.id,
                "instance": session.ruleset.to_json(),
                "config": session.config.to_json(),
                "engine_role": session.engine_role.value if session.engine_role else None,
                "history": [move_to_json(session.ruleset, rec.move)
                            for rec, _ in session.history],
                "created": session.created,
            })
        self.snapshot_path.parent.mkdir(parents=True, exist_ok=True)
        self.snapshot_path.write_text(json.dumps(doc))

    # -- session operations --------------------------------------------------

    def create(self, instance_json: dict, config_json: dict, engine_role) -> Session:
        self._ensure_loaded()
        try:
            ruleset = instance_from_json(instance_json)
        except InvalidInstanceError as exc:
            raise ApiError(400, "SchemaError", str(exc))
        except (KeyError, TypeError) as exc:
            raise ApiError(400, "SchemaError", f"malformed instance: {exc}")
        except ValueError as exc:
            raise ApiError(422, "InvalidInstance", str(exc))
        try:
            config = GameConfig.from_json(config_json or {})
        except (ValueError, TypeError) as exc:
            raise ApiError(400, "SchemaError", f"malformed config: {exc}")
        session = Session(id=uuid.uuid4().hex, ruleset=ruleset, config=config,
                          state=initial_state(ruleset, config),
                          engine_role=_player_from_json(engine_role))
        session.hero = _try_hero(session)
        with self._lock:
            self.sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        self._ensure_loaded()
        session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "NotFound", f"no session {session_id}")
        return session

    def _advance(self, session: Session, move: Move):
        state = session.state
        digest = canonical_key(state)
        session.state = apply_move(state, move)
        session.history.append((MoveRecord(move, state.to_move), digest))
        session.updated = time.time()
        if self.check_replay:
            replay = bft(initial_state(session.ruleset, session.config).board,
                         [rec.move for rec, _ in session.history],
                         session.config, session.ruleset)
            assert canonical_key(replay) == canonical_key(session.state)

    def _rebuild_hero(self, session: Session):
        """Recreate the hero's overlay bookkeeping from the move history.

        The hero's replies are deterministic, so replaying the villain's
        moves regenerates them; any divergence (or a history that stops on
        the hero's turn) drops to the search engine instead.
        """
        session.hero = None
        hero = _try_hero(session)
        if hero is None:
            return
        records = [rec for rec, _ in session.history]
        idx = 0
        try:
            while idx < len(records):
                rec = records[idx]
                if rec.player is hero.hero:
                    if idx != 0 or hero_first_move(hero) != rec.move:
                        return
                    idx += 1
                    continue
                if idx + 1 >= len(records):
                    return  # villain moved, the hero's reply was undone
                reply = hero_respond(hero, rec.move)
                nxt = records[idx + 1]
                if nxt.player is not hero.hero or reply != nxt.move:
                    return
                idx += 2
        except Exception:
            return
        session.hero = hero

    def _terminal(self, state: GameState) -> bool:
        return not legal_classical_moves(state) \
            and next(iter(legal_quantum_moves(state)), None) is None

    def _engine_move(self, session: Session) -> dict:
        """Choose and play the engine's move; never stalls."""
        state = session.state
        hero = session.hero
        if hero is not None and state.to_move is hero.hero:
            try:
                if not session.history:
                    move: Move = hero_first_move(hero)
                else:
                    move = hero_respond(hero, session.history[-1][0].move)
                self._advance(session, move)
                return {"move": move_to_json(session.ruleset, move),
                        "unsolved": False, "strategy": "hero"}
            except Exception:
                session.hero = None  # overlay broke; fall back to search
        unsolved = False
        try:
            result = solve(state, SolveLimits(max_seconds=self.engine_seconds))
            move = result.best_move
            if move is None:  # lost position: play the smallest legal move
                move = min(_legal_moves_list(state),
                           key=lambda m: move_key(session.ruleset, m))
        except ResourceExceededError:
            unsolved = True
            move = min(_legal_moves_list(state),
                       key=lambda m: move_key(session.ruleset, m))
        self._advance(session, move)
        return {"move": move_to_json(session.ruleset, move),
                "unsolved": unsolved, "strategy": "search"}

    def engine_turn(self, session: Session) -> Optional[dict]:
        if (session.engine_role is None
                or session.state.to_move is not session.engine_role
                or self._terminal(session.state)):
            return None
        return self._engine_move(session)

    def apply(self, session: Session, move_json: dict) -> Optional[dict]:
        with session.lock:
            if self._terminal(session.state):
                raise ApiError(409, "IllegalMove", "the game is over")
            try:
                move = move_from_json(session.ruleset, move_json)
            except (ValueError, KeyError, TypeError) as exc:
                raise ApiError(400, "SchemaError", f"malformed move: {exc}")
            if session.state.to_move is session.engine_role:
                raise ApiError(409, "IllegalMove", "it is the engine's turn")
            try:
                self._advance(session, move)
            except IllegalMoveError as exc:
                raise ApiError(409, "IllegalMove", exc.reason)
            return self.engine_turn(session)

    def undo(self, session: Session):
        with session.lock:
            if not session.history:
                raise ApiError(409, "NothingToUndo", "no moves to undo")
            records = [rec for rec, _ in session.history[:-1]]
            session.history = []
            session.state = initial_state(session.ruleset, session.config)
            for rec in records:
                self._advance(session, rec.move)
            self._rebuild_hero(session)
            session.updated = time.time()


def _state_view(session: Session, page: int = 0) -> dict:
    state = session.state
    realizations = [session.ruleset.position_to_json(r)
                    for r in state.board.realizations]
    total = len(realizations)
    window = realizations[page * REALIZATION_PAGE:(page + 1) * REALIZATION_PAGE]
    classical = legal_classical_moves(state)
    quantum_probe = next(iter(legal_quantum_moves(state)), None)
    return {
        "id": session.id,
        "ruleset": session.ruleset.kind,
        "to_move": state.to_move.value,
        "terminal": not classical and quantum_probe is None,
        "width": total,
        "realizations": window,
        "realization_page": page,
        "realization_pages": (total + REALIZATION_PAGE - 1) // REALIZATION_PAGE,
        "budgets": {"left": state.budgets[0], "right": state.budgets[1]},
        "config": session.config.to_json(),
        "engine_role": session.engine_role.value if session.engine_role else None,
        "legal_classical_count": len(classical),
        "quantum_available": quantum_probe is not None,
        "history_length": len(session.history),
    }


def create_app(store: Optional[SessionStore] = None,
               static_dir: Optional[Path] = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="qcgt", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error": {"code": exc.code,
                                               "reason": exc.reason}})

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(store.sessions)}

    @app.post("/games")
    async def create_game(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "SchemaError", "request body must be JSON")
        if not isinstance(body, dict) or "instance" not in body:
            raise ApiError(400, "SchemaError", "body needs an 'instance' field")
        session = store.create(body["instance"], body.get("config") or {},
                               body.get("engine_role"))
        with session.lock:
            engine = store.engine_turn(session)
        view = _state_view(session)
        if engine:
            view["engine"] = engine
        return view

    @app.get("/games/{session_id}")
    def get_game(session_id: str, page: int = 0):
        return _state_view(store.get(session_id), page=page)

    @app.get("/games/{session_id}/moves")
    def list_moves(session_id: str, kind: str = "classical",
                   page: int = 0, page_size: int = 50):
        session = store.get(session_id)
        page_size = max(1, min(page_size, MAX_MOVE_PAGE))
        state = session.state
        if kind == "classical":
            moves = legal_classical_moves(state)
            total: Any = len(moves)
            window = moves[page * page_size:(page + 1) * page_size]
        elif kind == "quantum":
            window = []
            seen = 0
            truncated = False
            for move in legal_quantum_moves(state):
                if seen >= MOVE_COUNT_LIMIT:
                    truncated = True
                    break
                if page * page_size <= seen < (page + 1) * page_size:
                    window.append(move)
                seen += 1
            total = "truncated" if truncated else seen
        else:
            raise ApiError(400, "SchemaError", "kind must be classical or quantum")
        return {
            "kind": kind,
            "page": page,
            "page_size": page_size,
            "total": total,
            "moves": [move_to_json(session.ruleset, m) for m in window],
        }

    @app.post("/games/{session_id}/move")
    async def post_move(session_id: str, request: Request):
        session = store.get(session_id)
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "SchemaError", "request body must be JSON")
        engine = store.apply(session, body)
        view = _state_view(session)
        if engine:
            view["engine"] = engine
        return view

    @app.post("/games/{session_id}/undo")
    def post_undo(session_id: str):
        session = store.get(session_id)
        store.undo(session)
        return _state_view(session)

    @app.get("/games/{session_id}/analysis")
    def analysis(session_id: str, max_nodes: int = 2_000_000,
                 max_seconds: float = 30.0):
        session = store.get(session_id)
        limits = SolveLimits(max_nodes=max(1, max_nodes),
                             max_seconds=max(0.001, max_seconds))
        try:
            result = solve(session.state, limits)
        except ResourceExceededError as exc:
            return {"status": "exceeded", "reason": str(exc)}
        payload = {
            "status": "solved",
            "outcome": result.outcome.value,
            "nodes": result.nodes,
        }
        if result.best_move is not None:
            payload["best"] = move_to_json(session.ruleset, result.best_move)
        return payload

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")
    return app
