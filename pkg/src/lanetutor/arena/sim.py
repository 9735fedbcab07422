"""Deterministic tick simulation: combat, movement, minions, towers, deaths.

Each step resolves in a fixed phase order:
  (1) status expiry and timers, (2) spell casts and pings, (3) hero movement,
  (4) hero auto-attacks and tower fire, (5) minion AI and wave spawns,
  (6) deaths, kill credit, gold/XP, (7) respawns, (8) win check.
Ties (several units dying the same tick) resolve by ascending unit id, so a
given (state, commands) pair always produces the same successor state.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from ..geometry import Vec2
from .config import GameConfig, MapSpec
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
    Slot,
    SpellCast,
    SpellKind,
    SpellSpec,
    StatusEffect,
    StatusKind,
    Team,
    TowerDestroyed,
    Unit,
    UnitKind,
)

# Hero spawn offsets around the team spawn point, by roster index.
_SPAWN_OFFSETS = (Vec2(0, 0), Vec2(4, 0), Vec2(0, 4), Vec2(4, 4), Vec2(8, 0))
# Lane assignment by roster index: the first hero takes bot lane.
_LANE_ORDER = (Lane.BOT, Lane.MID, Lane.TOP, Lane.BOT, Lane.MID)
# Rank-up priority on level up; the team heal caps lower than the rest.
_RANK_ORDER = (Slot.W, Slot.Q, Slot.E, Slot.R)
_RANK_CAPS = {Slot.Q: 5, Slot.W: 5, Slot.E: 5, Slot.R: 3}

_TOWER_TARGET_PRIORITY = {UnitKind.MINION: 0, UnitKind.HERO: 1}
_MINION_TARGET_PRIORITY = {
    UnitKind.MINION: 0,
    UnitKind.HERO: 1,
    UnitKind.TOWER: 2,
    UnitKind.NEXUS: 3,
}
# A minion chases an acquired target a little beyond its acquisition radius.
_AGGRO_KEEP_FACTOR = 1.6
_WAYPOINT_REACHED = 2.0


@dataclass
class GameState:
    """Full world state; the single source of truth for one match."""

    config: GameConfig
    map: MapSpec
    tick: int = 0
    units: dict[int, Unit] = field(default_factory=dict)  # ascending-id insertion order
    events_this_tick: list[Event] = field(default_factory=list)
    rng: random.Random = field(default_factory=random.Random)
    recent_damage: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    next_unit_id: int = 1
    winner: Team | None = None
    finished: bool = False
    _dying: list[int] = field(default_factory=list)

    def heroes(self, team: Team | None = None) -> list[Unit]:
        return [u for u in self.units.values()
                if u.kind is UnitKind.HERO and (team is None or u.team is team)]

    def living_enemies(self, team: Team) -> list[Unit]:
        return [u for u in self.units.values() if u.team is not team and u.alive]


def new_match(config: GameConfig, map_spec: MapSpec) -> GameState:
    """Build tick-0 state: heroes at spawn, structures at full hp, seeded RNG."""
    config.validate()
    map_spec.validate()
    state = GameState(config=config, map=map_spec, rng=random.Random(config.rng_seed))
    stats = config.stats
    for team in (Team.BLUE, Team.RED):
        for i in range(config.heroes_per_team):
            pos = map_spec.spawn_points[team] + _SPAWN_OFFSETS[i]
            _add_unit(state, Unit(
                id=0, kind=UnitKind.HERO, team=team, pos=pos.clamped(0, map_spec.size),
                hp=stats.hero_hp, max_hp=stats.hero_hp,
                move_speed=stats.hero_speed,
                attack=AttackSpec(stats.hero_range, stats.hero_damage, stats.hero_attack_cooldown),
                mana=stats.hero_mana, max_mana=stats.hero_mana,
                mana_regen=stats.hero_mana_regen, hp_regen=stats.hero_hp_regen,
                lane=_LANE_ORDER[i],
            ))
    for team, lane, pos in map_spec.towers:
        _add_unit(state, Unit(
            id=0, kind=UnitKind.TOWER, team=team, pos=pos,
            hp=stats.tower_hp, max_hp=stats.tower_hp,
            attack=AttackSpec(stats.tower_range, stats.tower_damage, stats.tower_attack_cooldown),
            lane=lane,
        ))
    for team in (Team.BLUE, Team.RED):
        _add_unit(state, Unit(
            id=0, kind=UnitKind.NEXUS, team=team, pos=map_spec.nexus[team],
            hp=stats.nexus_hp, max_hp=stats.nexus_hp,
        ))
    return state


def _add_unit(state: GameState, unit: Unit) -> Unit:
    unit.id = state.next_unit_id
    state.next_unit_id += 1
    state.units[unit.id] = unit
    return unit


def equip_kit(unit: Unit, kit: dict[Slot, SpellSpec]) -> None:
    """Give a hero a spellbook; all slots start at rank 1, off cooldown."""
    unit.spells = dict(kit)
    unit.spell_cooldowns = {slot: 0 for slot in kit}
    unit.spell_ranks = {slot: 1 for slot in kit}


# ---------------------------------------------------------------------------
# Queries shared with the tutor and tip engine

def is_silenced(unit: Unit, tick: int) -> bool:
    return unit.has_status(StatusKind.SILENCE, tick)


def is_rooted(unit: Unit, tick: int) -> bool:
    return unit.has_status(StatusKind.ROOT, tick)


def status_speed_multiplier(unit: Unit, tick: int) -> float:
    """Strongest slow and strongest boost apply; root zeroes movement."""
    slow = 0.0
    boost = 0.0
    for s in unit.statuses:
        if s.expires_at <= tick:
            continue
        if s.kind is StatusKind.ROOT:
            return 0.0
        if s.kind is StatusKind.SLOW:
            slow = max(slow, s.pct)
        elif s.kind is StatusKind.SPEED_BOOST:
            boost = max(boost, s.pct)
    return (1.0 - slow / 100.0) * (1.0 + boost / 100.0)


def injured_ally_multiplier(state: GameState, unit: Unit, direction: Vec2) -> float:
    """Speed-passive factor: boosted while heading toward (angle < 90 deg) a
    living allied hero below the trigger fraction, otherwise 1."""
    passive = unit.speed_passive
    if passive is None or (direction.x == 0.0 and direction.y == 0.0):
        return 1.0
    for ally in state.units.values():
        if (ally.kind is UnitKind.HERO and ally.team is unit.team and ally.alive
                and ally.id != unit.id and ally.hp_frac < passive.trigger_frac):
            to_ally = ally.pos - unit.pos
            if direction.dot(to_ally) > 0.0:
                return 1.0 + passive.boost_pct / 100.0
    return 1.0


def effective_speed(state: GameState, unit: Unit, direction: Vec2) -> float:
    return (unit.move_speed
            * status_speed_multiplier(unit, state.tick)
            * injured_ally_multiplier(state, unit, direction))


def spell_magnitude(unit: Unit, spec: SpellSpec, rank_bonus: float) -> float:
    rank = unit.spell_ranks.get(spec.slot, 1)
    return spec.magnitude * (1.0 + rank_bonus * (rank - 1))


def minion_path(state: GameState, unit: Unit) -> tuple[Vec2, ...]:
    lane_wps = state.map.lanes[unit.lane]
    if unit.team is Team.BLUE:
        return lane_wps + (state.map.nexus[Team.RED],)
    return tuple(reversed(lane_wps)) + (state.map.nexus[Team.BLUE],)


def hero_spawn(state: GameState, hero: Unit) -> Vec2:
    team_ids = sorted(u.id for u in state.heroes(hero.team))
    offset = _SPAWN_OFFSETS[team_ids.index(hero.id)]
    return (state.map.spawn_points[hero.team] + offset).clamped(0, state.map.size)


# ---------------------------------------------------------------------------
# Damage / healing / kill credit

def deal_damage(state: GameState, src: Unit, dst: Unit, amount: float) -> None:
    if not dst.alive or amount <= 0:
        return
    t = state.tick
    dst.hp = max(0.0, dst.hp - amount)
    state.events_this_tick.append(Damage(t, src.id, dst.id, amount))
    state.recent_damage.setdefault(dst.id, []).append((src.id, t))
    if src.kind is UnitKind.HERO and dst.kind is UnitKind.HERO:
        _mark_tower_aggro(state, src, dst)
    if dst.hp <= 0.0:
        dst.alive = False
        state._dying.append(dst.id)


def _mark_tower_aggro(state: GameState, attacker: Unit, victim: Unit) -> None:
    until = state.tick + state.config.tower_aggro_window
    for tower in state.units.values():
        if (tower.kind is UnitKind.TOWER and tower.team is victim.team
                and tower.pos.dist_sq(victim.pos) <= tower.attack.range * tower.attack.range):
            tower.aggro_until[attacker.id] = until


def heal(unit: Unit, amount: float) -> None:
    if unit.alive:
        unit.hp = min(unit.max_hp, unit.hp + amount)


def resolve_kill_credit(state: GameState, victim_id: int) -> tuple[int, tuple[int, ...]]:
    """Killer is the final damage source; assists are the other enemy heroes
    that damaged the victim within the assist window."""
    entries = state.recent_damage.get(victim_id, [])
    if not entries:
        raise ValueError(f"unit {victim_id} has no recorded damage")
    victim = state.units[victim_id]
    killer = entries[-1][0]
    horizon = state.tick - state.config.assist_window
    assists = set()
    for attacker_id, at_tick in entries:
        if at_tick < horizon or attacker_id == killer:
            continue
        attacker = state.units.get(attacker_id)
        if attacker is not None and attacker.kind is UnitKind.HERO and attacker.team is not victim.team:
            assists.add(attacker_id)
    return killer, tuple(sorted(assists))


def award_xp(state: GameState, hero: Unit, amount: int) -> None:
    hero.xp += amount
    stats = state.config.stats
    levels = state.config.xp_levels
    while hero.level <= len(levels) and hero.xp >= levels[hero.level - 1]:
        hero.level += 1
        hero.max_hp += stats.level_hp_bonus
        hero.hp = min(hero.max_hp, hero.hp + stats.level_hp_bonus)
        if hero.attack is not None:
            hero.attack = AttackSpec(hero.attack.range,
                                     hero.attack.damage + stats.level_damage_bonus,
                                     hero.attack.cooldown, hero.attack.remaining)
        _rank_up(hero)


def _rank_up(hero: Unit) -> None:
    for slot in _RANK_ORDER:
        if slot in hero.spell_ranks and hero.spell_ranks[slot] < _RANK_CAPS[slot]:
            hero.spell_ranks[slot] += 1
            return


# ---------------------------------------------------------------------------
# The step function

def step(state: GameState, commands: dict[int, Command]) -> list[Event]:
    """Advance one tick. Mutates state and returns the tick's events."""
    if state.finished:
        raise RuntimeError("match is over; no further steps")
    t = state.tick
    events: list[Event] = []
    state.events_this_tick = events
    state._dying = []

    _phase_upkeep(state, t)
    accepted = _phase_commands(state, commands, t)
    _phase_hero_movement(state, accepted, t)
    _phase_attacks(state, accepted, t)
    _phase_minions(state, t)
    _phase_deaths(state, t)
    _phase_respawns(state, t)
    _phase_win_check(state, t)

    state.tick = t + 1
    return events


def _phase_upkeep(state: GameState, t: int) -> None:
    horizon = t - state.config.assist_window
    for victim_id in list(state.recent_damage):
        entries = [e for e in state.recent_damage[victim_id] if e[1] >= horizon]
        if entries:
            state.recent_damage[victim_id] = entries
        else:
            del state.recent_damage[victim_id]
    for u in state.units.values():
        if not u.alive:
            continue
        if u.statuses:
            u.statuses = [s for s in u.statuses if s.expires_at > t]
        if u.attack is not None and u.attack.remaining > 0:
            u.attack.remaining -= 1
        if u.spell_cooldowns:
            for slot, cd in u.spell_cooldowns.items():
                if cd > 0:
                    u.spell_cooldowns[slot] = cd - 1
        if u.kind is UnitKind.HERO:
            hp_rate, mana_rate = u.hp_regen, u.mana_regen
            stats = state.config.stats
            fountain = state.map.spawn_points[u.team]
            if u.pos.dist_sq(fountain) <= stats.fountain_radius * stats.fountain_radius:
                hp_rate += stats.fountain_regen
                mana_rate += stats.fountain_regen
            if u.mana < u.max_mana:
                u.mana = min(u.max_mana, u.mana + mana_rate)
            if u.hp < u.max_hp:
                u.hp = min(u.max_hp, u.hp + hp_rate)


def _phase_commands(state: GameState, commands: dict[int, Command],
                    t: int) -> dict[int, Command]:
    """Validate commands, resolve casts and pings, keep move/attack orders
    for the later phases."""
    accepted: dict[int, Command] = {}
    for hid in sorted(commands):
        cmd = commands[hid]
        hero = state.units.get(hid)
        if hero is None or hero.kind is not UnitKind.HERO:
            state.events_this_tick.append(CommandRejected(t, hid, "not_a_hero"))
            continue
        if not hero.alive:
            state.events_this_tick.append(CommandRejected(t, hid, "dead"))
            continue
        if isinstance(cmd, Idle):
            continue
        if isinstance(cmd, Ping):
            state.events_this_tick.append(
                PingEvent(t, hid, cmd.pos.clamped(0, state.map.size), cmd.kind))
            continue
        if isinstance(cmd, Cast):
            _resolve_cast(state, hero, cmd, t)
            continue
        accepted[hid] = cmd
    return accepted


def _resolve_cast(state: GameState, hero: Unit, cmd: Cast, t: int) -> None:
    def reject(reason: str) -> None:
        state.events_this_tick.append(CommandRejected(t, hero.id, reason))

    spec = hero.spells.get(cmd.slot)
    if spec is None:
        reject("no_such_spell")
        return
    if is_silenced(hero, t):
        reject("silenced")
        return
    if hero.spell_cooldowns.get(cmd.slot, 0) > 0:
        reject("on_cooldown")
        return
    if hero.mana < spec.mana_cost:
        reject("out_of_mana")
        return

    stats = state.config.stats
    magnitude = spell_magnitude(hero, spec, stats.rank_magnitude_bonus)

    if spec.kind is SpellKind.SINGLE_TARGET_HEAL:
        target = state.units.get(cmd.target) if cmd.target is not None else None
        if target is None or not target.alive or target.team is not hero.team:
            reject("bad_target")
            return
        if hero.pos.dist_sq(target.pos) > spec.range * spec.range:
            reject("out_of_range")
            return
        heal(target, magnitude)
        target_id, target_pos = target.id, None
    elif spec.kind is SpellKind.GLOBAL_TEAM_HEAL:
        for ally in state.heroes(hero.team):
            if ally.alive:
                heal(ally, magnitude)
        target_id, target_pos = None, None
    else:  # area spells anchored at a map position
        pos = cmd.pos if cmd.pos is not None else (
            state.units[cmd.target].pos if cmd.target in state.units else None)
        if pos is None:
            reject("bad_target")
            return
        if hero.pos.dist_sq(pos) > spec.range * spec.range:
            reject("out_of_range")
            return
        r_sq = spec.radius * spec.radius
        victims = [u for u in state.units.values()
                   if u.alive and u.team is not hero.team
                   and u.kind in (UnitKind.HERO, UnitKind.MINION)
                   and u.pos.dist_sq(pos) <= r_sq]
        for victim in victims:
            if spec.kind is SpellKind.AOE_DAMAGE_SLOW:
                victim.statuses.append(StatusEffect(
                    StatusKind.SLOW, t + spec.status_duration, stats.aoe_slow_pct))
            else:
                victim.statuses.append(StatusEffect(StatusKind.SILENCE, t + spec.status_duration))
                victim.statuses.append(StatusEffect(StatusKind.ROOT, t + spec.status_duration))
            if magnitude > 0:
                deal_damage(state, hero, victim, magnitude)
        target_id, target_pos = None, pos

    hero.mana -= spec.mana_cost
    hero.spell_cooldowns[cmd.slot] = spec.cooldown
    state.events_this_tick.append(SpellCast(t, hero.id, cmd.slot, target_id, target_pos))


def _phase_hero_movement(state: GameState, accepted: dict[int, Command], t: int) -> None:
    size = state.map.size
    for hid, cmd in accepted.items():
        hero = state.units[hid]
        if not hero.alive:
            continue
        if isinstance(cmd, MoveTo):
            goal = cmd.pos
        elif isinstance(cmd, Attack):
            target = state.units.get(cmd.target)
            if (target is None or not target.alive
                    or hero.pos.dist_sq(target.pos) <= hero.attack.range * hero.attack.range):
                continue
            goal = target.pos
        else:
            continue
        direction = goal - hero.pos
        speed = effective_speed(state, hero, direction)
        if speed > 0.0:
            hero.pos = hero.pos.step_toward(goal, speed).clamped(0, size)


def _phase_attacks(state: GameState, accepted: dict[int, Command], t: int) -> None:
    for hid, cmd in accepted.items():
        if not isinstance(cmd, Attack):
            continue
        hero = state.units[hid]
        target = state.units.get(cmd.target)
        hero.attack_target = target.id if target is not None and target.alive else None
        if (hero.alive and target is not None and target.alive
                and hero.attack.remaining == 0
                and hero.pos.dist_sq(target.pos) <= hero.attack.range * hero.attack.range):
            deal_damage(state, hero, target, hero.attack.damage)
            hero.attack.remaining = hero.attack.cooldown
    for tower in list(state.units.values()):
        if tower.kind is UnitKind.TOWER and tower.alive:
            _tower_fire(state, tower, t)


def _tower_fire(state: GameState, tower: Unit, t: int) -> None:
    if tower.aggro_until:
        tower.aggro_until = {hid: until for hid, until in tower.aggro_until.items()
                             if until >= t}
    r_sq = tower.attack.range * tower.attack.range
    in_range = [u for u in state.units.values()
                if u.alive and u.team is not tower.team
                and u.kind in _TOWER_TARGET_PRIORITY
                and tower.pos.dist_sq(u.pos) <= r_sq]
    target: Unit | None = None
    # Aggro'd heroes (attacked an allied hero under this tower) come first.
    aggro = [u for u in in_range if u.kind is UnitKind.HERO and u.id in tower.aggro_until]
    if aggro:
        target = min(aggro, key=lambda u: u.id)
    else:
        minions = [u for u in in_range if u.kind is UnitKind.MINION]
        pool = minions if minions else [u for u in in_range if u.kind is UnitKind.HERO]
        if pool:
            target = min(pool, key=lambda u: (tower.pos.dist_sq(u.pos), u.id))
    tower.attack_target = target.id if target is not None else None
    if target is not None and tower.attack.remaining == 0:
        deal_damage(state, tower, target, tower.attack.damage)
        tower.attack.remaining = tower.attack.cooldown


def _phase_minions(state: GameState, t: int) -> None:
    stats = state.config.stats
    keep_sq = (stats.minion_aggro_radius * _AGGRO_KEEP_FACTOR) ** 2
    aggro_sq = stats.minion_aggro_radius ** 2
    size = state.map.size
    for minion in [u for u in state.units.values() if u.kind is UnitKind.MINION]:
        if not minion.alive:
            continue
        target = state.units.get(minion.attack_target) if minion.attack_target else None
        if target is None or not target.alive or minion.pos.dist_sq(target.pos) > keep_sq:
            minion.attack_target = None
            target = None
            best = None
            for u in state.units.values():
                if not u.alive or u.team is minion.team:
                    continue
                d_sq = minion.pos.dist_sq(u.pos)
                if d_sq > aggro_sq:
                    continue
                key = (_MINION_TARGET_PRIORITY[u.kind], d_sq, u.id)
                if best is None or key < best[0]:
                    best = (key, u)
            if best is not None:
                target = best[1]
                minion.attack_target = target.id
        if target is not None:
            if minion.pos.dist_sq(target.pos) <= minion.attack.range * minion.attack.range:
                if minion.attack.remaining == 0:
                    deal_damage(state, minion, target, minion.attack.damage)
                    minion.attack.remaining = minion.attack.cooldown
            else:
                _move_unit(state, minion, target.pos, size)
        else:
            path = minion_path(state, minion)
            while (minion.waypoint_index < len(path) - 1
                   and minion.pos.dist(path[minion.waypoint_index]) <= _WAYPOINT_REACHED):
                minion.waypoint_index += 1
            _move_unit(state, minion, path[minion.waypoint_index], size)
    if t > 0 and t % state.config.wave_interval == 0:
        _spawn_waves(state)


def _move_unit(state: GameState, unit: Unit, goal: Vec2, size: float) -> None:
    direction = goal - unit.pos
    speed = effective_speed(state, unit, direction)
    if speed > 0.0:
        unit.pos = unit.pos.step_toward(goal, speed).clamped(0, size)


def _spawn_waves(state: GameState) -> None:
    stats = state.config.stats
    for team in (Team.BLUE, Team.RED):
        for lane in (Lane.TOP, Lane.MID, Lane.BOT):
            wps = state.map.lanes[lane]
            start = wps[0] if team is Team.BLUE else wps[-1]
            for _ in range(state.config.wave_size):
                _add_unit(state, Unit(
                    id=0, kind=UnitKind.MINION, team=team, pos=start,
                    hp=stats.minion_hp, max_hp=stats.minion_hp,
                    move_speed=stats.minion_speed,
                    attack=AttackSpec(stats.minion_range, stats.minion_damage,
                                      stats.minion_attack_cooldown),
                    lane=lane,
                ))


def _phase_deaths(state: GameState, t: int) -> None:
    rewards = state.config.rewards
    for victim_id in sorted(set(state._dying)):
        victim = state.units.get(victim_id)
        if victim is None or victim.hp > 0:
            continue
        killer_id, assists = resolve_kill_credit(state, victim_id)
        killer = state.units.get(killer_id)
        if victim.kind is UnitKind.HERO:
            state.events_this_tick.append(Kill(t, killer_id, victim_id, assists))
            if killer is not None and killer.kind is UnitKind.HERO:
                killer.gold += rewards.hero_kill_gold
                award_xp(state, killer, rewards.hero_kill_xp)
            for aid in assists:
                assist = state.units[aid]
                assist.gold += rewards.assist_gold
                award_xp(state, assist, rewards.assist_xp)
            victim.statuses = []
            victim.attack_target = None
            victim.respawn_at = (t + state.config.respawn_base
                                 + state.config.respawn_per_level * (victim.level - 1))
        elif victim.kind is UnitKind.MINION:
            if killer is not None and killer.kind is UnitKind.HERO:
                killer.gold += rewards.minion_gold
                award_xp(state, killer, rewards.minion_xp)
            del state.units[victim_id]
            state.recent_damage.pop(victim_id, None)
        elif victim.kind is UnitKind.TOWER:
            state.events_this_tick.append(TowerDestroyed(t, victim_id, killer_id))
            if killer is not None and killer.kind is UnitKind.HERO:
                killer.gold += rewards.tower_gold
                award_xp(state, killer, rewards.tower_xp)
            del state.units[victim_id]
            state.recent_damage.pop(victim_id, None)
        else:  # nexus
            state.winner = victim.team.opponent
    state._dying = []


def _phase_respawns(state: GameState, t: int) -> None:
    for hero in state.heroes():
        if not hero.alive and hero.respawn_at is not None and hero.respawn_at <= t:
            hero.alive = True
            hero.respawn_at = None
            hero.hp = hero.max_hp
            hero.mana = hero.max_mana
            hero.pos = hero_spawn(state, hero)
            hero.statuses = []
            hero.attack_target = None


def _phase_win_check(state: GameState, t: int) -> None:
    if state.winner is not None:
        state.events_this_tick.append(MatchEnd(t, state.winner))
        state.finished = True
    elif t + 1 >= state.config.max_ticks:
        state.events_this_tick.append(MatchEnd(t, None))
        state.finished = True


# ---------------------------------------------------------------------------
# State fingerprinting for replay checks

def state_checksum(state: GameState) -> str:
    """SHA-256 over a canonical dump of the world; equal states hash equal."""
    doc = {
        "tick": state.tick,
        "winner": state.winner.value if state.winner else None,
        "finished": state.finished,
        "units": [_unit_digest(u) for u in sorted(state.units.values(), key=lambda u: u.id)],
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _unit_digest(u: Unit) -> list:
    return [
        u.id, u.kind.value, u.team.value, u.pos.x, u.pos.y, u.hp, u.max_hp,
        u.mana, u.gold, u.xp, u.level, u.alive, u.respawn_at,
        u.waypoint_index, u.attack_target,
        u.attack.remaining if u.attack else None,
        u.attack.damage if u.attack else None,
        sorted((s.kind.value, s.expires_at, s.pct) for s in u.statuses),
        sorted((sl.value, cd) for sl, cd in u.spell_cooldowns.items()),
        sorted((sl.value, rk) for sl, rk in u.spell_ranks.items()),
    ]
