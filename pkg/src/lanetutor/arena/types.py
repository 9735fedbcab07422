"""Unit, spell, status, command and event types for the arena simulation."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..geometry import Vec2


class Team(str, Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def opponent(self) -> "Team":
        return Team.RED if self is Team.BLUE else Team.BLUE


class UnitKind(str, Enum):
    HERO = "hero"
    MINION = "minion"
    TOWER = "tower"
    NEXUS = "nexus"


class Lane(str, Enum):
    TOP = "top"
    MID = "mid"
    BOT = "bot"


class Slot(str, Enum):
    Q = "Q"
    W = "W"
    E = "E"
    R = "R"


class SpellKind(str, Enum):
    AOE_DAMAGE_SLOW = "aoe_damage_slow"
    SINGLE_TARGET_HEAL = "single_target_heal"
    AOE_SILENCE_ROOT = "aoe_silence_root"
    GLOBAL_TEAM_HEAL = "global_team_heal"


class StatusKind(str, Enum):
    SLOW = "slow"
    ROOT = "root"
    SILENCE = "silence"
    SPEED_BOOST = "speed_boost"


class PingKind(str, Enum):
    DANGER = "danger"
    CAUTION = "caution"


@dataclass(slots=True)
class StatusEffect:
    """A timed modifier. Active while tick < expires_at."""

    kind: StatusKind
    expires_at: int
    pct: float = 0.0  # slow/speed_boost magnitude, in (0, 100]


@dataclass(slots=True)
class AttackSpec:
    range: float
    damage: float
    cooldown: int
    remaining: int = 0


@dataclass(frozen=True, slots=True)
class SpellSpec:
    slot: Slot
    kind: SpellKind
    range: float
    radius: float
    magnitude: float
    status_duration: int
    cooldown: int
    mana_cost: float

    def validate(self) -> None:
        if self.cooldown <= 0:
            raise ValueError(f"spell {self.slot.value}: cooldown must be positive")
        if self.magnitude < 0:
            raise ValueError(f"spell {self.slot.value}: magnitude must be >= 0")


@dataclass(frozen=True, slots=True)
class SpeedPassive:
    """Move-speed bonus while heading toward a badly hurt ally."""

    trigger_frac: float
    boost_pct: float


@dataclass(slots=True)
class Unit:
    id: int
    kind: UnitKind
    team: Team
    pos: Vec2
    hp: float
    max_hp: float
    move_speed: float = 0.0
    attack: AttackSpec | None = None
    mana: float = 0.0
    max_mana: float = 0.0
    mana_regen: float = 0.0
    hp_regen: float = 0.0
    statuses: list[StatusEffect] = field(default_factory=list)
    gold: int = 0
    xp: int = 0
    level: int = 1
    alive: bool = True
    respawn_at: int | None = None
    lane: Lane | None = None
    spells: dict[Slot, SpellSpec] = field(default_factory=dict)
    spell_cooldowns: dict[Slot, int] = field(default_factory=dict)
    spell_ranks: dict[Slot, int] = field(default_factory=dict)
    speed_passive: SpeedPassive | None = None
    attack_target: int | None = None
    waypoint_index: int = 0
    aggro_until: dict[int, int] = field(default_factory=dict)  # towers: hero id -> tick

    @property
    def hp_frac(self) -> float:
        return self.hp / self.max_hp

    def has_status(self, kind: StatusKind, tick: int) -> bool:
        return any(s.kind is kind and s.expires_at > tick for s in self.statuses)


# ---------------------------------------------------------------------------
# Per-tick hero commands

@dataclass(frozen=True, slots=True)
class MoveTo:
    pos: Vec2


@dataclass(frozen=True, slots=True)
class Attack:
    target: int


@dataclass(frozen=True, slots=True)
class Cast:
    slot: Slot
    target: int | None = None
    pos: Vec2 | None = None


@dataclass(frozen=True, slots=True)
class Ping:
    pos: Vec2
    kind: PingKind


@dataclass(frozen=True, slots=True)
class Idle:
    pass


Command = MoveTo | Attack | Cast | Ping | Idle


# ---------------------------------------------------------------------------
# Events. Every event carries the tick at which it occurred.

@dataclass(frozen=True, slots=True)
class Kill:
    tick: int
    killer: int
    victim: int
    assists: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class TowerDestroyed:
    tick: int
    unit_id: int
    by: int


@dataclass(frozen=True, slots=True)
class SpellCast:
    tick: int
    caster: int
    slot: Slot
    target: int | None
    pos: Vec2 | None


@dataclass(frozen=True, slots=True)
class Damage:
    tick: int
    src: int
    dst: int
    amount: float


@dataclass(frozen=True, slots=True)
class PingEvent:
    tick: int
    author: int
    pos: Vec2
    kind: PingKind


@dataclass(frozen=True, slots=True)
class MatchEnd:
    tick: int
    winner: Team | None


@dataclass(frozen=True, slots=True)
class CommandRejected:
    tick: int
    hero: int
    reason: str


@dataclass(frozen=True, slots=True)
class TipEmitted:
    """Wrapper placing a tip-engine event on the arena event stream."""

    tick: int
    rule_id: str
    recipients: tuple[int, ...]
    message: str
    ping_kind: PingKind | None
    ping_pos: Vec2 | None


Event = (
    Kill
    | TowerDestroyed
    | SpellCast
    | Damage
    | PingEvent
    | MatchEnd
    | CommandRejected
    | TipEmitted
)
