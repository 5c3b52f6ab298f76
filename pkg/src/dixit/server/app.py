"""Network layer: FastAPI app exposing lobby REST endpoints, the per-game
WebSocket channel, and static hosting for the web client.

Lobby management (create / seat an agent / start) is operator REST; seated
players speak only the four legal client message types over the socket.
Within a session every mutation runs under one asyncio lock, so the sync
core in session.py sees a serialized event stream. Humans that outlive the
configured move timeout forfeit to the deterministic fallback move.
"""

from __future__ import annotations

import asyncio
import json
import secrets
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from ..agents import AgentSpec
from ..cards import CandidateLexicon, Card, load_deck, load_lexicon
from ..engine import GameConfig, Phase
from ..errors import DixitError, ProtocolViolation
from .session import GameSession, Outbound, SessionConfig


@dataclass
class ServerConfig:
    deck_path: str
    lexicon_path: str
    host: str = "127.0.0.1"
    port: int = 8732
    game: GameConfig = field(default_factory=GameConfig)
    default_agent: AgentSpec = field(default_factory=AgentSpec)
    agent_seat_limit: int | None = None
    move_timeout: float | None = None
    static_dir: str | None = None
    locale: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "ServerConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        base = path.parent
        return cls(
            deck_path=str((base / raw["deck"]).resolve()),
            lexicon_path=str((base / raw["lexicon"]).resolve()),
            host=raw.get("host", "127.0.0.1"),
            port=int(raw.get("port", 8732)),
            game=GameConfig.from_dict(raw.get("game", {})),
            default_agent=AgentSpec.from_dict(raw.get("default_agent", {})),
            agent_seat_limit=raw.get("agent_seat_limit"),
            move_timeout=raw.get("move_timeout"),
            static_dir=str((base / raw["static_dir"]).resolve()) if raw.get("static_dir") else None,
            locale=raw.get("locale"),
        )


class SessionRuntime:
    """A session plus its connection table, lock, and pending move timers."""

    def __init__(self, session: GameSession, move_timeout: float | None):
        self.session = session
        self.move_timeout = move_timeout
        self.lock = asyncio.Lock()
        self.sockets: dict[int, WebSocket] = {}
        self.timers: dict[int, asyncio.Task] = {}

    async def dispatch(self, outbound: Outbound) -> None:
        for seat, env in outbound:
            ws = self.sockets.get(seat)
            if ws is None:
                continue
            try:
                await ws.send_text(json.dumps(env))
            except Exception:
                self.sockets.pop(seat, None)

    def arm_timers(self) -> None:
        """(Re)arm a forfeit timer for every human seat the game waits on."""
        if self.move_timeout is None:
            return
        pending = set(self.session.pending_human_seats())
        for seat, task in list(self.timers.items()):
            if seat not in pending:
                task.cancel()
                del self.timers[seat]
        for seat in pending:
            if seat not in self.timers:
                self.timers[seat] = asyncio.create_task(self._forfeit_later(seat))

    async def _forfeit_later(self, seat: int) -> None:
        await asyncio.sleep(self.move_timeout or 0.0)
        async with self.lock:
            self.timers.pop(seat, None)
            outbound = self.session.apply_fallback(seat)
            await self.dispatch(outbound)
            self.arm_timers()

    def shutdown_timers(self) -> None:
        for task in self.timers.values():
            task.cancel()
        self.timers.clear()


def create_app(config: ServerConfig) -> FastAPI:
    app = FastAPI(title="dixit server")
    deck: list[Card] = load_deck(config.deck_path)
    lexicon: CandidateLexicon = load_lexicon(
        config.lexicon_path, max_tokens=config.game.phrase_limit
    )
    runtimes: dict[str, SessionRuntime] = {}
    app.state.runtimes = runtimes
    app.state.config = config

    def get_runtime(game_id: str) -> SessionRuntime:
        rt = runtimes.get(game_id)
        if rt is None:
            raise HTTPException(status_code=404, detail=f"no game {game_id}")
        return rt

    @app.post("/games")
    async def create_game(body: dict | None = None) -> dict:
        body = body or {}
        game_id = secrets.token_hex(4)
        overrides = {
            k: body[k] for k in ("n_players", "phrase_limit", "target_score") if k in body
        }
        seed = body.get("rng_seed", secrets.randbits(63))
        game_cfg = GameConfig(
            n_players=overrides.get("n_players", config.game.n_players),
            phrase_limit=overrides.get("phrase_limit", config.game.phrase_limit),
            target_score=overrides.get("target_score", config.game.target_score),
            rng_seed=seed,
        )
        session = GameSession(
            game_id,
            SessionConfig(
                game=game_cfg,
                agent_seat_limit=config.agent_seat_limit,
                move_timeout=config.move_timeout,
                locale=config.locale,
            ),
            deck,
            lexicon,
            default_agent=config.default_agent,
        )
        runtimes[game_id] = SessionRuntime(session, config.move_timeout)
        return {"game_id": game_id, "n_players": game_cfg.n_players}

    @app.get("/games/{game_id}")
    async def game_status(game_id: str) -> dict:
        rt = get_runtime(game_id)
        s = rt.session
        return {
            "game_id": game_id,
            "n_players": s.n_players,
            "seats_filled": s.seats_filled(),
            "started": s.started,
            "over": s.state is not None and s.state.phase is Phase.GAME_OVER,
        }

    @app.post("/games/{game_id}/agents")
    async def add_agent(game_id: str, body: dict | None = None) -> dict:
        rt = get_runtime(game_id)
        async with rt.lock:
            try:
                spec = AgentSpec.from_dict(body) if body else None
                seat, outbound = rt.session.seat_agent(spec)
            except (DixitError, ValueError) as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            await rt.dispatch(outbound)
        return {"seat": seat, "seats_filled": rt.session.seats_filled()}

    @app.post("/games/{game_id}/start")
    async def start_game(game_id: str) -> dict:
        rt = get_runtime(game_id)
        async with rt.lock:
            try:
                outbound = rt.session.start()
            except DixitError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            await rt.dispatch(outbound)
            rt.arm_timers()
        return {"started": True}

    @app.websocket("/ws/{game_id}")
    async def game_socket(ws: WebSocket, game_id: str) -> None:
        rt = runtimes.get(game_id)
        await ws.accept()
        if rt is None:
            await ws.send_text(json.dumps(
                {"type": "Error", "seq": 0, "payload": {"code": "unknown_game", "message": game_id}}
            ))
            await ws.close()
            return
        seat = await _join(rt, ws)
        if seat is None:
            await ws.close()
            return
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    frame = json.loads(raw)
                except json.JSONDecodeError:
                    frame = {"type": None}
                async with rt.lock:
                    outbound = rt.session.handle_message(seat, frame)
                    await rt.dispatch(outbound)
                    rt.arm_timers()
        except WebSocketDisconnect:
            async with rt.lock:
                rt.sockets.pop(seat, None)
                holder = rt.session.seats[seat]
                if holder is not None:
                    holder.connected = False

    async def _join(rt: SessionRuntime, ws: WebSocket) -> int | None:
        """First frame must be JoinLobby; seats the player and resyncs."""
        raw = await ws.receive_text()
        try:
            frame = json.loads(raw)
        except json.JSONDecodeError:
            frame = {}
        if frame.get("type") != "JoinLobby":
            await ws.send_text(json.dumps(
                {
                    "type": "Error",
                    "seq": 0,
                    "payload": {
                        "code": "protocol_violation",
                        "message": "first message must be JoinLobby",
                    },
                }
            ))
            return None
        payload = frame.get("payload", {}) or {}
        async with rt.lock:
            try:
                seat, outbound = rt.session.join_human(
                    name=str(payload.get("name", "anonymous")),
                    token=payload.get("token"),
                )
            except (DixitError, ValueError) as exc:
                code = exc.code if isinstance(exc, DixitError) else "bad_request"
                await ws.send_text(json.dumps(
                    {"type": "Error", "seq": 0, "payload": {"code": code, "message": str(exc)}}
                ))
                return None
            rt.sockets[seat] = ws
            await ws.send_text(json.dumps(
                {
                    "type": "LobbyState",
                    "seq": 0,
                    "payload": {
                        "you": seat,
                        "token": rt.session.token_for(seat),
                        "seats_filled": rt.session.seats_filled(),
                        "n_players": rt.session.n_players,
                        "started": rt.session.started,
                    },
                }
            ))
            # the seat's own outbox (past the cursor) already includes anything
            # join_human just queued for it; dispatch the rest to other seats
            cursor = int(payload.get("resume_from", 0) or 0)
            for env in rt.session.buffered(seat, after_seq=cursor):
                await ws.send_text(json.dumps(env))
            await rt.dispatch([(s, env) for s, env in outbound if s != seat])
            rt.arm_timers()
        return seat

    if config.static_dir and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="webui")

    return app
