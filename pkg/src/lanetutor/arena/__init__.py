"""Deterministic desk-scale MOBA arena."""
from .config import (
    CombatStats,
    ConfigError,
    GameConfig,
    MapSpec,
    RewardTable,
    config_hash,
    default_config_path,
    default_kit,
    default_map,
    load_config_file,
    save_config_file,
)
from .eventlog import EventLogError, EventLogWriter, event_line, event_to_dict, read_event_dicts
from .sim import (
    GameState,
    award_xp,
    deal_damage,
    effective_speed,
    equip_kit,
    heal,
    injured_ally_multiplier,
    is_rooted,
    is_silenced,
    new_match,
    resolve_kill_credit,
    state_checksum,
    step,
)
from .types import (
    Attack,
    AttackSpec,
    Cast,
    Command,
    CommandRejected,
    Damage,
    Event,
    Idle,
    Kill,
    Lane,
    MatchEnd,
    MoveTo,
    Ping,
    PingEvent,
    PingKind,
    Slot,
    SpellCast,
    SpellKind,
    SpellSpec,
    SpeedPassive,
    StatusEffect,
    StatusKind,
    Team,
    TipEmitted,
    TowerDestroyed,
    Unit,
    UnitKind,
)

__all__ = [name for name in dir() if not name.startswith("_")]
