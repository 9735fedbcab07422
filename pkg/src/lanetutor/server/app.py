"""Live match host: one arena match per process, streamed over WebSocket.

A single asyncio task owns the simulation and advances it at wall-clock
cadence; websocket handlers never touch game state directly. Client
commands land in a pending map and are applied atomically at the next tick
boundary, so a headless re-simulation of the recorded command stream
reproduces the match exactly. Snapshots broadcast every `snapshot_every`
ticks; tip frames ride the same flush as the snapshot that follows them.
"""
from __future__ import annotations

import asyncio
import contextlib
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import TypeAdapter, ValidationError

from ..analytics import kda_factor, scorelines_from_events
from ..arena.config import GameConfig, MapSpec, default_map
from ..arena.eventlog import command_from_dict, event_to_dict
from ..arena.types import TipEmitted
from ..harness import MatchSession, build_session
from ..tips import TipTable, default_table
from .schemas import (
    ClientMessage,
    CommandMessage,
    EndMessage,
    ErrorMessage,
    EventMessage,
    HealthResponse,
    JoinMessage,
    MatchInfo,
    PingMessage,
    PingView,
    ScoreLineView,
    SimulateRequest,
    SimulateResponse,
    SnapshotMessage,
    TipMessage,
    UnitView,
    WelcomeMessage,
    message_schema,
)

_CLIENT_ADAPTER: TypeAdapter = TypeAdapter(ClientMessage)
_HEADLINE_EVENTS = ("kill", "tower_destroyed", "match_end")


@dataclass
class ServerSettings:
    config: GameConfig
    map_spec: MapSpec
    condition: str = "support_plus_tips"
    seed: int = 0
    tick_hz: float | None = None  # defaults to config.tick_rate
    snapshot_every: int = 2
    tip_table: TipTable | None = None
    debug: bool = False
    static_dir: str | None = None


@dataclass(eq=False)  # identity semantics; connections live in a set
class Connection:
    role: str
    hero_id: int | None
    queue: asyncio.Queue = field(default_factory=asyncio.Queue)

    def push(self, model) -> None:
        self.queue.put_nowait(model.model_dump_json())


class LiveMatch:
    """Simulation authority plus connection fan-out."""

    def __init__(self, session: MatchSession, tick_hz: float, snapshot_every: int):
        self.session = session
        self.tick_hz = tick_hz
        self.snapshot_every = snapshot_every
        self.pending: dict[int, object] = {}
        self.admin_damage: list[tuple[int, float]] = []
        self.connections: set[Connection] = set()
        self.player_conn: Connection | None = None
        self._events_since: list[dict] = []
        self._tips_since: list[TipEmitted] = []
        self.ended = asyncio.Event()

    # -- connection management -------------------------------------------

    def claim_player_slot(self, conn: Connection) -> int | None:
        if self.player_conn is not None:
            return None
        conn.hero_id = self.session.novice_id
        self.player_conn = conn
        return conn.hero_id

    def attach(self, conn: Connection) -> None:
        self.connections.add(conn)

    def detach(self, conn: Connection) -> None:
        self.connections.discard(conn)
        if self.player_conn is conn:
            # The hero stands idle; the tutor keeps supporting it.
            self.player_conn = None

    def match_info(self) -> MatchInfo:
        state = self.session.state
        return MatchInfo(tick_rate=int(round(self.tick_hz)), snapshot_every=self.snapshot_every,
                         map_size=state.map.size,
                         heroes_per_team=state.config.heroes_per_team,
                         condition=self.session.condition,
                         lanes={lane.value: [[wp.x, wp.y] for wp in wps]
                                for lane, wps in state.map.lanes.items()})

    # -- simulation loop ---------------------------------------------------

    async def run(self) -> None:
        loop = asyncio.get_running_loop()
        period = 1.0 / self.tick_hz
        deadline = loop.time()
        state = self.session.state
        try:
            while not state.finished:
                external = self.pending
                self.pending = {}
                self._apply_admin_damage(state)
                events = self.session.advance(external)
                for ev in events:
                    if isinstance(ev, TipEmitted):
                        self._tips_since.append(ev)
                    self._events_since.append(event_to_dict(ev))
                if state.tick % self.snapshot_every == 0 or state.finished:
                    self._flush()
                deadline += period
                delay = deadline - loop.time()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    deadline = loop.time()  # fell behind; don't burst
                    await asyncio.sleep(0)
            self._broadcast(EndMessage(tick=state.tick, winner=state.winner.value
                                       if state.winner else None))
        finally:
            self.ended.set()

    def _apply_admin_damage(self, state) -> None:
        while self.admin_damage:
            unit_id, amount = self.admin_damage.pop(0)
            unit = state.units.get(unit_id)
            if unit is not None and unit.alive:
                unit.hp = max(1.0, unit.hp - amount)

    def _flush(self) -> None:
        state = self.session.state
        for d in self._events_since:
            if d["type"] in _HEADLINE_EVENTS:
                self._broadcast(EventMessage(event=d))
        tips, self._tips_since = self._tips_since, []
        for tip in tips:
            frame = TipMessage(tick=tip.tick, rule_id=tip.rule_id, message=tip.message,
                               ping=PingView(kind=tip.ping_kind.value, x=tip.ping_pos.x,
                                             y=tip.ping_pos.y) if tip.ping_kind else None)
            for conn in list(self.connections):
                if conn.hero_id is not None and conn.hero_id in tip.recipients:
                    conn.push(frame)
        units = [_unit_view(u, state.tick) for u in state.units.values()]
        events, self._events_since = self._events_since, []
        for conn in list(self.connections):
            cooldowns = None
            if conn.hero_id is not None:
                hero = state.units.get(conn.hero_id)
                if hero is not None and hero.spell_cooldowns:
                    cooldowns = {slot.value: cd for slot, cd in hero.spell_cooldowns.items()}
            conn.push(SnapshotMessage(tick=state.tick, units=units,
                                      cooldowns=cooldowns, events=events))

    def _broadcast(self, model) -> None:
        for conn in list(self.connections):
            conn.push(model)


def _unit_view(u, tick: int) -> UnitView:
    return UnitView(id=u.id, kind=u.kind.value, team=u.team.value,
                    x=u.pos.x, y=u.pos.y, hp=u.hp, max_hp=u.max_hp, mana=u.mana,
                    level=u.level, alive=u.alive,
                    statuses=sorted({s.kind.value for s in u.statuses if s.expires_at > tick}))


# ---------------------------------------------------------------------------
# App factory

def create_app(settings: ServerSettings | None = None) -> FastAPI:
    settings = settings or ServerSettings(config=GameConfig(), map_spec=default_map())
    tick_hz = settings.tick_hz or float(settings.config.tick_rate)
    tip_table = settings.tip_table
    if settings.condition == "support_plus_tips" and tip_table is None:
        tip_table = default_table()

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        session = build_session(settings.config, settings.map_spec,
                                condition=settings.condition, seed=settings.seed,
                                tip_table=tip_table, novice_is_external=True,
                                keep_events=True)
        live = LiveMatch(session, tick_hz, settings.snapshot_every)
        app.state.live = live
        app.state.sim_task = asyncio.create_task(live.run())
        yield
        app.state.sim_task.cancel()
        with contextlib.suppress(asyncio.CancelledError):
            await app.state.sim_task

    app = FastAPI(title="lanetutor live server", lifespan=lifespan)
    app.state.settings = settings

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        live: LiveMatch = app.state.live
        return HealthResponse(status="ok", tick=live.session.state.tick,
                              finished=live.session.state.finished,
                              connections=len(live.connections))

    @app.get("/match/info", response_model=MatchInfo)
    def match_info() -> MatchInfo:
        return app.state.live.match_info()

    @app.get("/schema")
    def schema() -> dict:
        return message_schema()

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        """Run a headless match with the hosted ruleset (REST wrapper over
        the batch core; runs in the threadpool, not the live loop)."""
        config = settings.config
        if req.max_ticks is not None:
            config = replace(config, max_ticks=req.max_ticks)
        if req.heroes_per_team is not None:
            config = replace(config, heroes_per_team=req.heroes_per_team)
        try:
            session = build_session(config, settings.map_spec, condition=req.condition,
                                    seed=req.seed, tip_table=tip_table, keep_events=True)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        session.run_to_end()
        events = [event_to_dict(e) for e in session.all_events]
        players = sorted(u.id for u in session.state.heroes())
        lines = scorelines_from_events(events, players)
        return SimulateResponse(
            condition=req.condition, seed=req.seed,
            duration_ticks=session.state.tick,
            winner=session.state.winner.value if session.state.winner else None,
            novice_id=session.novice_id,
            scorelines=[ScoreLineView(player=s.player, kills=s.kills, deaths=s.deaths,
                                      assists=s.assists,
                                      kda=kda_factor(s.kills, s.deaths, s.assists))
                        for s in lines],
        )

    if settings.debug:
        @app.post("/debug/damage")
        def debug_damage(body: dict) -> dict:
            live: LiveMatch = app.state.live
            live.admin_damage.append((int(body["unit_id"]), float(body["amount"])))
            return {"ok": True}

    @app.websocket("/match")
    async def match_ws(ws: WebSocket) -> None:
        await ws.accept()
        live: LiveMatch = app.state.live
        conn = Connection(role="spectator", hero_id=None)

        async def violation(reason: str) -> None:
            await ws.send_text(ErrorMessage(reason=reason).model_dump_json())
            await ws.close(code=1008)

        try:
            first = _parse_client(await ws.receive_text())
        except WebSocketDisconnect:
            return
        except ValueError as exc:
            await violation(str(exc))
            return
        if not isinstance(first, JoinMessage):
            await violation("first message must be join")
            return
        conn.role = first.role
        if first.role == "player":
            if live.claim_player_slot(conn) is None:
                await violation("player slot already taken")
                return
        live.attach(conn)
        await ws.send_text(WelcomeMessage(role=conn.role, hero_id=conn.hero_id,
                                          config=live.match_info()).model_dump_json())

        async def pump() -> None:
            while True:
                await ws.send_text(await conn.queue.get())

        sender = asyncio.create_task(pump())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = _parse_client(raw)
                except ValueError as exc:
                    await violation(str(exc))
                    break
                if isinstance(msg, JoinMessage):
                    await violation("already joined")
                    break
                if conn.role != "player":
                    await violation("spectators cannot issue commands")
                    break
                try:
                    if isinstance(msg, CommandMessage):
                        command = command_from_dict(msg.command.to_wire_dict())
                    elif isinstance(msg, PingMessage):
                        command = command_from_dict({"kind": "ping", "x": msg.x,
                                                     "y": msg.y, "ping": msg.kind})
                    else:
                        await violation("unsupported message")
                        break
                except ValueError as exc:
                    await violation(str(exc))
                    break
                live.pending[conn.hero_id] = command
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            live.detach(conn)

    if settings.static_dir and Path(settings.static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=settings.static_dir, html=True), name="ui")

    return app


def _parse_client(raw: str):
    try:
        return _CLIENT_ADAPTER.validate_json(raw)
    except ValidationError as exc:
        raise ValueError(f"invalid message: {exc.errors()[0].get('msg', 'schema error')}") from None
