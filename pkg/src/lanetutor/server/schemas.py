"""Wire schema for the live match channel and the REST wrappers.

Messages travel as UTF-8 JSON text frames over the `/match` WebSocket.
Every frame carries a schema version field `v`. The generated JSON schema
(data/messages.schema.json) is the contract shared with the browser client.
"""
from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Client -> server

class CommandModel(BaseModel):
    kind: Literal["move_to", "attack", "cast", "ping", "idle"]
    x: float | None = None
    y: float | None = None
    target: int | None = None
    slot: Literal["Q", "W", "E", "R"] | None = None
    ping: Literal["danger", "caution"] | None = None

    def to_wire_dict(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class JoinMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["join"]
    role: Literal["player", "spectator"]


class CommandMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["command"]
    command: CommandModel


class PingMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["ping"]
    x: float
    y: float
    kind: Literal["danger", "caution"]


ClientMessage = Annotated[Union[JoinMessage, CommandMessage, PingMessage],
                          Field(discriminator="type")]


# ---------------------------------------------------------------------------
# Server -> client

class MatchInfo(BaseModel):
    tick_rate: int
    snapshot_every: int
    map_size: float
    heroes_per_team: int
    condition: str
    # static map geometry for the client renderer: lane -> [x, y] waypoints
    lanes: dict[str, list[list[float]]] = Field(default_factory=dict)


class WelcomeMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["welcome"] = "welcome"
    role: Literal["player", "spectator"]
    hero_id: int | None
    config: MatchInfo


class UnitView(BaseModel):
    id: int
    kind: str
    team: str
    x: float
    y: float
    hp: float
    max_hp: float
    mana: float
    level: int
    alive: bool
    statuses: list[str]


class SnapshotMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["snapshot"] = "snapshot"
    tick: int
    units: list[UnitView]
    cooldowns: dict[str, int] | None = None
    events: list[dict] = Field(default_factory=list)


class PingView(BaseModel):
    kind: str
    x: float
    y: float


class TipMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["tip"] = "tip"
    tick: int
    rule_id: str
    message: str
    ping: PingView | None = None


class EventMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["event"] = "event"
    event: dict


class EndMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["end"] = "end"
    tick: int
    winner: str | None


class ErrorMessage(BaseModel):
    v: int = SCHEMA_VERSION
    type: Literal["error"] = "error"
    reason: str


ServerMessage = Annotated[
    Union[WelcomeMessage, SnapshotMessage, TipMessage, EventMessage, EndMessage, ErrorMessage],
    Field(discriminator="type"),
]


# ---------------------------------------------------------------------------
# REST wrappers around the headless core

class HealthResponse(BaseModel):
    status: str
    tick: int
    finished: bool
    connections: int


class SimulateRequest(BaseModel):
    condition: Literal["baseline", "support_only", "support_plus_tips"] = "support_plus_tips"
    seed: int = 0
    max_ticks: int | None = Field(default=None, ge=1, le=50_000)
    heroes_per_team: int | None = Field(default=None, ge=1, le=5)


class ScoreLineView(BaseModel):
    player: int
    kills: int
    deaths: int
    assists: int
    kda: float


class SimulateResponse(BaseModel):
    condition: str
    seed: int
    duration_ticks: int
    winner: str | None
    novice_id: int
    scorelines: list[ScoreLineView]


def message_schema() -> dict:
    """JSON schema for the full wire protocol, both directions."""
    from pydantic import TypeAdapter
    return {
        "version": SCHEMA_VERSION,
        "client_to_server": TypeAdapter(ClientMessage).json_schema(),
        "server_to_client": TypeAdapter(ServerMessage).json_schema(),
    }
