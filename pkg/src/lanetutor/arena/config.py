"""Match configuration: rulesets, the default map, canonical hashing.

Every combat constant lives here so a single JSON document fully identifies
a ruleset. The shipped defaults are in data/default_config.json; tests pin
that file by hash.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..geometry import Vec2
from .types import Lane, Slot, SpellKind, SpellSpec, Team


class ConfigError(ValueError):
    """Raised for invalid or malformed match configuration."""


@dataclass(frozen=True, slots=True)
class RewardTable:
    minion_gold: int = 18
    minion_xp: int = 25
    hero_kill_gold: int = 300
    hero_kill_xp: int = 120
    assist_gold: int = 150
    assist_xp: int = 60
    tower_gold: int = 150
    tower_xp: int = 0


@dataclass(frozen=True, slots=True)
class CombatStats:
    hero_hp: float = 300.0
    hero_damage: float = 18.0
    hero_range: float = 15.0
    hero_attack_cooldown: int = 20
    hero_speed: float = 1.2
    hero_mana: float = 200.0
    hero_mana_regen: float = 0.25
    hero_hp_regen: float = 0.06
    fountain_regen: float = 2.5
    fountain_radius: float = 14.0
    level_hp_bonus: float = 30.0
    level_damage_bonus: float = 3.0
    minion_hp: float = 60.0
    minion_damage: float = 6.0
    minion_range: float = 8.0
    minion_attack_cooldown: int = 20
    minion_speed: float = 0.9
    minion_aggro_radius: float = 18.0
    tower_hp: float = 600.0
    tower_damage: float = 35.0
    tower_range: float = 30.0
    tower_attack_cooldown: int = 25
    nexus_hp: float = 900.0
    rank_magnitude_bonus: float = 0.25
    aoe_slow_pct: float = 35.0


def default_kit() -> dict[Slot, SpellSpec]:
    """Support kit: AoE damage+slow, single-target heal, AoE silence+root,
    and a team-wide heal that ignores range."""
    return {
        Slot.Q: SpellSpec(Slot.Q, SpellKind.AOE_DAMAGE_SLOW, range=70.0, radius=20.0,
                          magnitude=35.0, status_duration=40, cooldown=100, mana_cost=40.0),
        Slot.W: SpellSpec(Slot.W, SpellKind.SINGLE_TARGET_HEAL, range=55.0, radius=0.0,
                          magnitude=70.0, status_duration=0, cooldown=120, mana_cost=50.0),
        Slot.E: SpellSpec(Slot.E, SpellKind.AOE_SILENCE_ROOT, range=80.0, radius=15.0,
                          magnitude=20.0, status_duration=30, cooldown=160, mana_cost=60.0),
        Slot.R: SpellSpec(Slot.R, SpellKind.GLOBAL_TEAM_HEAL, range=0.0, radius=0.0,
                          magnitude=90.0, status_duration=0, cooldown=600, mana_cost=100.0),
    }


@dataclass(frozen=True, slots=True)
class GameConfig:
    tick_rate: int = 20
    wave_interval: int = 240
    wave_size: int = 2
    heroes_per_team: int = 2
    assist_window: int = 200
    respawn_base: int = 150
    respawn_per_level: int = 30
    tower_aggro_window: int = 80
    max_ticks: int = 6000
    rng_seed: int = 0
    rewards: RewardTable = field(default_factory=RewardTable)
    xp_levels: tuple[int, ...] = (120, 300, 540, 840, 1200)
    stats: CombatStats = field(default_factory=CombatStats)
    kit: dict[Slot, SpellSpec] = field(default_factory=default_kit)

    def validate(self) -> None:
        for name in ("tick_rate", "wave_interval", "wave_size", "assist_window",
                     "respawn_base", "tower_aggro_window", "max_ticks"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 1 <= self.heroes_per_team <= 5:
            raise ConfigError("heroes_per_team must be in 1..5")
        if list(self.xp_levels) != sorted(self.xp_levels) or any(x <= 0 for x in self.xp_levels):
            raise ConfigError("xp_levels must be positive and nondecreasing")
        for spec in self.kit.values():
            spec.validate()


@dataclass(frozen=True, slots=True)
class MapSpec:
    size: float
    lanes: dict[Lane, tuple[Vec2, ...]]  # waypoints ordered blue side -> red side
    towers: tuple[tuple[Team, Lane, Vec2], ...]
    nexus: dict[Team, Vec2]
    spawn_points: dict[Team, Vec2]

    def validate(self) -> None:
        if self.size <= 0:
            raise ConfigError("map size must be positive")
        if set(self.lanes) != {Lane.TOP, Lane.MID, Lane.BOT}:
            raise ConfigError("map must define exactly the three lanes top/mid/bot")
        for lane, wps in self.lanes.items():
            if len(wps) < 2:
                raise ConfigError(f"lane {lane.value} needs at least 2 waypoints")
            for wp in wps:
                if not wp.is_finite() or not (0 <= wp.x <= self.size and 0 <= wp.y <= self.size):
                    raise ConfigError(f"lane {lane.value} waypoint outside map bounds")
        for team in Team:
            if team not in self.nexus or team not in self.spawn_points:
                raise ConfigError(f"map missing nexus/spawn for team {team.value}")
            per_lane = {lane: 0 for lane in Lane}
            for t, lane, _ in self.towers:
                if t is team:
                    per_lane[lane] += 1
            if any(n < 1 for n in per_lane.values()):
                raise ConfigError(f"team {team.value} needs at least one tower per lane")
        blue_spawn, red_spawn = self.spawn_points[Team.BLUE], self.spawn_points[Team.RED]
        for lane, wps in self.lanes.items():
            if wps[0].dist_sq(blue_spawn) > wps[0].dist_sq(red_spawn):
                raise ConfigError(f"lane {lane.value} waypoints must start on the blue side")


def default_map(size: float = 200.0) -> MapSpec:
    """Square map, blue base bottom-left, red base top-right, L-shaped side
    lanes and a diagonal mid lane. One tower per lane per team."""
    lanes = {
        Lane.TOP: (Vec2(12, 24), Vec2(12, 176), Vec2(24, 188), Vec2(176, 188)),
        Lane.MID: (Vec2(22, 22), Vec2(178, 178)),
        Lane.BOT: (Vec2(24, 12), Vec2(176, 12), Vec2(188, 24), Vec2(188, 176)),
    }
    towers = []
    for lane in (Lane.TOP, Lane.MID, Lane.BOT):
        towers.append((Team.BLUE, lane, _point_along(lanes[lane], 0.30)))
        towers.append((Team.RED, lane, _point_along(lanes[lane], 0.70)))
    scale = size / 200.0
    if scale != 1.0:
        lanes = {ln: tuple(wp.scaled(scale) for wp in wps) for ln, wps in lanes.items()}
        towers = [(t, ln, p.scaled(scale)) for t, ln, p in towers]
    return MapSpec(
        size=size,
        lanes=lanes,
        towers=tuple(towers),
        nexus={Team.BLUE: Vec2(10 * scale, 10 * scale), Team.RED: Vec2(190 * scale, 190 * scale)},
        spawn_points={Team.BLUE: Vec2(16 * scale, 16 * scale), Team.RED: Vec2(184 * scale, 184 * scale)},
    )


def _point_along(waypoints: tuple[Vec2, ...], frac: float) -> Vec2:
    """Point at the given fraction of a polyline's total length."""
    total = sum(waypoints[i].dist(waypoints[i + 1]) for i in range(len(waypoints) - 1))
    remaining = total * frac
    for i in range(len(waypoints) - 1):
        seg = waypoints[i].dist(waypoints[i + 1])
        if remaining <= seg:
            d = waypoints[i + 1] - waypoints[i]
            return waypoints[i] + d.scaled(remaining / seg)
        remaining -= seg
    return waypoints[-1]


# ---------------------------------------------------------------------------
# Serialization. The canonical byte form (sorted keys, compact separators)
# hashes to the ruleset identity.

def config_to_dict(config: GameConfig) -> dict:
    d = asdict(config)
    d["xp_levels"] = list(config.xp_levels)
    d["kit"] = {slot.value: _spell_to_dict(spec) for slot, spec in config.kit.items()}
    return d


def _spell_to_dict(spec: SpellSpec) -> dict:
    return {
        "kind": spec.kind.value,
        "range": spec.range,
        "radius": spec.radius,
        "magnitude": spec.magnitude,
        "status_duration": spec.status_duration,
        "cooldown": spec.cooldown,
        "mana_cost": spec.mana_cost,
    }


def map_to_dict(spec: MapSpec) -> dict:
    return {
        "size": spec.size,
        "lanes": {lane.value: [[wp.x, wp.y] for wp in wps] for lane, wps in spec.lanes.items()},
        "towers": [[t.value, lane.value, [p.x, p.y]] for t, lane, p in spec.towers],
        "nexus": {t.value: [p.x, p.y] for t, p in spec.nexus.items()},
        "spawn_points": {t.value: [p.x, p.y] for t, p in spec.spawn_points.items()},
    }


def _check_unknown(d: dict, allowed: set[str], where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown field(s) in {where}: {', '.join(sorted(unknown))}")


def config_from_dict(d: dict) -> GameConfig:
    allowed = {f.name for f in fields(GameConfig)}
    _check_unknown(d, allowed, "config")
    kwargs = dict(d)
    if "rewards" in kwargs:
        _check_unknown(kwargs["rewards"], {f.name for f in fields(RewardTable)}, "config.rewards")
        kwargs["rewards"] = RewardTable(**kwargs["rewards"])
    if "stats" in kwargs:
        _check_unknown(kwargs["stats"], {f.name for f in fields(CombatStats)}, "config.stats")
        kwargs["stats"] = CombatStats(**kwargs["stats"])
    if "xp_levels" in kwargs:
        kwargs["xp_levels"] = tuple(kwargs["xp_levels"])
    if "kit" in kwargs:
        kit = {}
        for slot_name, spell in kwargs["kit"].items():
            try:
                slot = Slot(slot_name)
            except ValueError:
                raise ConfigError(f"unknown spell slot {slot_name!r}") from None
            _check_unknown(spell, {"kind", "range", "radius", "magnitude",
                                   "status_duration", "cooldown", "mana_cost"},
                           f"config.kit.{slot_name}")
            try:
                kind = SpellKind(spell["kind"])
            except (KeyError, ValueError):
                raise ConfigError(f"spell {slot_name}: missing or unknown kind") from None
            kit[slot] = SpellSpec(slot=slot, kind=kind,
                                  range=float(spell["range"]), radius=float(spell["radius"]),
                                  magnitude=float(spell["magnitude"]),
                                  status_duration=int(spell["status_duration"]),
                                  cooldown=int(spell["cooldown"]),
                                  mana_cost=float(spell["mana_cost"]))
        kwargs["kit"] = kit
    try:
        config = GameConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    config.validate()
    return config


def map_from_dict(d: dict) -> MapSpec:
    _check_unknown(d, {"size", "lanes", "towers", "nexus", "spawn_points"}, "map")
    try:
        spec = MapSpec(
            size=float(d["size"]),
            lanes={Lane(name): tuple(Vec2(float(x), float(y)) for x, y in wps)
                   for name, wps in d["lanes"].items()},
            towers=tuple((Team(t), Lane(lane), Vec2(float(p[0]), float(p[1])))
                         for t, lane, p in d["towers"]),
            nexus={Team(t): Vec2(float(p[0]), float(p[1])) for t, p in d["nexus"].items()},
            spawn_points={Team(t): Vec2(float(p[0]), float(p[1]))
                          for t, p in d["spawn_points"].items()},
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"malformed map: {exc}") from None
    spec.validate()
    return spec


def canonical_bytes(config: GameConfig, map_spec: MapSpec) -> bytes:
    doc = {"config": config_to_dict(config), "map": map_to_dict(map_spec)}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def config_hash(config: GameConfig, map_spec: MapSpec) -> str:
    return hashlib.sha256(canonical_bytes(config, map_spec)).hexdigest()


def save_config_file(path: str | Path, config: GameConfig, map_spec: MapSpec) -> None:
    doc = {"config": config_to_dict(config), "map": map_to_dict(map_spec)}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_config_file(path: str | Path) -> tuple[GameConfig, MapSpec]:
    """Load a UTF-8 JSON ruleset {config, map}. Unknown fields are rejected."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config file must contain a JSON object")
    _check_unknown(doc, {"config", "map"}, "ruleset file")
    config = config_from_dict(doc.get("config", {}))
    map_spec = map_from_dict(doc["map"]) if "map" in doc else default_map()
    return config, map_spec


def default_config_path() -> Path:
    return Path(__file__).resolve().parent.parent / "data" / "default_config.json"
