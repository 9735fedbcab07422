"""Support tutor: partner selection, follow movement, and the spell layer.

Two layers drive one hero. The movement layer keeps the tutor near its
partner at an adjustable distance without crowding them; the skill layer is
a behavior tree choosing between the team heal, crowd control on threats
near the partner, single-target heals, and a self-preservation retreat.
Every branch guard folds castability in, so a branch fires only when its
action can actually execute; that keeps the decision trace auditable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from . import bt
from .arena.config import GameConfig
from .arena.sim import GameState, equip_kit, hero_spawn, injured_ally_multiplier, is_silenced
from .arena.types import (
    Cast,
    Command,
    Idle,
    Lane,
    MoveTo,
    Slot,
    SpeedPassive,
    Team,
    Unit,
)
from .geometry import Vec2


class TutorError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class TutorConfig:
    follow_distance: float = 40.0
    min_separation: float = 15.0
    heal_threshold: float = 0.6
    ult_threshold: float = 0.4
    ult_min_allies: int = 3
    retreat_threshold: float = 0.25
    cc_engage_radius: float = 60.0
    passive_trigger: float = 0.4
    passive_boost_pct: float = 70.0

    def validate(self) -> None:
        if not 0 < self.min_separation < self.follow_distance:
            raise TutorError("require 0 < min_separation < follow_distance")
        for name in ("heal_threshold", "ult_threshold", "retreat_threshold", "passive_trigger"):
            if not 0 < getattr(self, name) < 1:
                raise TutorError(f"{name} must lie in (0, 1)")
        if not 0 < self.passive_boost_pct <= 100:
            raise TutorError("passive_boost_pct must lie in (0, 100]")
        if self.ult_min_allies < 1:
            raise TutorError("ult_min_allies must be >= 1")

    @classmethod
    def for_team_size(cls, heroes_per_team: int, **overrides) -> "TutorConfig":
        """Default tuning; the team-heal quorum shrinks with the roster."""
        quorum = min(3, max(1, math.ceil(heroes_per_team / 2)))
        overrides.setdefault("ult_min_allies", quorum)
        cfg = cls(**overrides)
        cfg.validate()
        return cfg


@dataclass(slots=True)
class TutorState:
    hero_id: int
    partner: int
    tree: bt.BTNode
    config: TutorConfig

    def cooldowns(self, state: GameState) -> dict[Slot, int]:
        return dict(state.units[self.hero_id].spell_cooldowns)


@dataclass(frozen=True, slots=True)
class Decision:
    tick: int
    branch: int
    command: Command


def select_partner(state: GameState, team: Team, exclude: int | None = None) -> int:
    """The bot-lane ally, lowest id on a tie; with no bot-lane assignment,
    the ally nearest the team-side end of the bot lane."""
    allies = [u for u in state.heroes(team) if u.id != exclude]
    if not allies:
        raise TutorError(f"team {team.value} has no eligible partner")
    bot_laners = [u for u in allies if u.lane is Lane.BOT]
    if bot_laners:
        return min(bot_laners, key=lambda u: u.id).id
    wps = state.map.lanes[Lane.BOT]
    lane_end = wps[0] if team is Team.BLUE else wps[-1]
    return min(allies, key=lambda u: (u.pos.dist_sq(lane_end), u.id)).id


def setup_tutor(state: GameState, hero_id: int, config: TutorConfig | None = None,
                tree: bt.BTNode | None = None,
                game_config: GameConfig | None = None) -> TutorState:
    """Equip the hero with the support kit and speed passive, pick a partner."""
    hero = state.units[hero_id]
    cfg = config or TutorConfig.for_team_size(state.config.heroes_per_team)
    cfg.validate()
    equip_kit(hero, (game_config or state.config).kit)
    hero.speed_passive = SpeedPassive(cfg.passive_trigger, cfg.passive_boost_pct)
    hero.lane = Lane.BOT
    partner = select_partner(state, hero.team, exclude=hero_id)
    ts = TutorState(hero_id=hero_id, partner=partner, tree=tree or default_tree(), config=cfg)
    errors = bt.validate(ts.tree, REGISTRY)
    if errors:
        raise TutorError("tutor tree invalid: " + "; ".join(errors))
    return ts


# ---------------------------------------------------------------------------
# Target selection helpers (pure; shared by guards and actions)

def _can_cast(state: GameState, hero: Unit, slot: Slot) -> bool:
    spec = hero.spells.get(slot)
    return (spec is not None
            and hero.spell_cooldowns.get(slot, 0) == 0
            and hero.mana >= spec.mana_cost
            and not is_silenced(hero, state.tick))


def _living_team_heroes(state: GameState, team: Team) -> list[Unit]:
    return [u for u in state.heroes(team) if u.alive]


def _nearest_threat(state: GameState, ts: TutorState) -> Unit | None:
    partner = state.units.get(ts.partner)
    if partner is None or not partner.alive:
        return None
    radius_sq = ts.config.cc_engage_radius ** 2
    threats = [u for u in state.heroes(partner.team.opponent)
               if u.alive and u.pos.dist_sq(partner.pos) <= radius_sq]
    if not threats:
        return None
    return min(threats, key=lambda u: (u.pos.dist_sq(partner.pos), u.id))


def _cc_slot_for(state: GameState, ts: TutorState, threat: Unit) -> Slot | None:
    """Silence/root takes precedence over the damage+slow."""
    tutor = state.units[ts.hero_id]
    for slot in (Slot.E, Slot.Q):
        spec = tutor.spells.get(slot)
        if (spec is not None and _can_cast(state, tutor, slot)
                and tutor.pos.dist_sq(threat.pos) <= spec.range * spec.range):
            return slot
    return None


def _heal_target(state: GameState, ts: TutorState) -> Unit | None:
    tutor = state.units[ts.hero_id]
    spec = tutor.spells.get(Slot.W)
    if spec is None:
        return None
    range_sq = spec.range * spec.range
    hurt = [u for u in _living_team_heroes(state, tutor.team)
            if u.id != tutor.id and u.hp_frac < ts.config.heal_threshold
            and tutor.pos.dist_sq(u.pos) <= range_sq]
    if not hurt:
        return None
    return min(hurt, key=lambda u: (u.hp_frac, u.id))


# ---------------------------------------------------------------------------
# Branch guards, in priority order. decide() fires the first true guard.

def guard_team_heal(state: GameState, ts: TutorState) -> bool:
    tutor = state.units[ts.hero_id]
    if not _can_cast(state, tutor, Slot.R):
        return False
    hurt = sum(1 for u in _living_team_heroes(state, tutor.team)
               if u.hp_frac < ts.config.ult_threshold)
    return hurt >= ts.config.ult_min_allies


def guard_crowd_control(state: GameState, ts: TutorState) -> bool:
    threat = _nearest_threat(state, ts)
    return threat is not None and _cc_slot_for(state, ts, threat) is not None


def guard_ally_heal(state: GameState, ts: TutorState) -> bool:
    tutor = state.units[ts.hero_id]
    return _can_cast(state, tutor, Slot.W) and _heal_target(state, ts) is not None


def guard_self_retreat(state: GameState, ts: TutorState) -> bool:
    return state.units[ts.hero_id].hp_frac < ts.config.retreat_threshold


#: Guards for branches 1..4; branch 5 (follow) is unconditional.
BRANCH_GUARDS = (guard_team_heal, guard_crowd_control, guard_ally_heal, guard_self_retreat)


def follow_point(state: GameState, ts: TutorState) -> Vec2:
    """The spot at follow_distance from the partner along the partner->tutor
    direction; never within min_separation of the partner."""
    tutor = state.units[ts.hero_id]
    partner = state.units[ts.partner]
    cfg = ts.config
    offset = tutor.pos - partner.pos
    direction = offset.normalized()
    if direction.x == 0.0 and direction.y == 0.0:
        direction = (hero_spawn(state, tutor) - partner.pos).normalized()
        if direction.x == 0.0 and direction.y == 0.0:
            direction = Vec2(1.0, 0.0)
    point = (partner.pos + direction.scaled(cfg.follow_distance)).clamped(0, state.map.size)
    if point.dist(partner.pos) < cfg.min_separation:
        # Clamping at a map edge pulled the point onto the partner; aim inward.
        center = Vec2(state.map.size / 2, state.map.size / 2)
        inward = (center - partner.pos).normalized()
        if inward.x == 0.0 and inward.y == 0.0:
            inward = Vec2(1.0, 0.0)
        point = (partner.pos + inward.scaled(cfg.follow_distance)).clamped(0, state.map.size)
    return point


def passive_speed(state: GameState, hero: Unit, direction: Vec2) -> float:
    """Effective move speed given the injured-ally passive and a heading."""
    return hero.move_speed * injured_ally_multiplier(state, hero, direction)


# ---------------------------------------------------------------------------
# Behavior-tree wiring

def _predicate(guard):
    return lambda board: guard(board["state"], board["tutor"])


def _action(branch: int, make_command):
    def run(board: bt.Blackboard) -> bt.Status:
        command = make_command(board["state"], board["tutor"])
        if command is None:
            return bt.Status.FAILURE
        board.emit((branch, command))
        return bt.Status.SUCCESS
    return run


def _cmd_team_heal(state: GameState, ts: TutorState) -> Command:
    return Cast(Slot.R)


def _cmd_crowd_control(state: GameState, ts: TutorState) -> Command | None:
    threat = _nearest_threat(state, ts)
    if threat is None:
        return None
    slot = _cc_slot_for(state, ts, threat)
    if slot is None:
        return None
    return Cast(slot, pos=threat.pos)


def _cmd_heal(state: GameState, ts: TutorState) -> Command | None:
    target = _heal_target(state, ts)
    if target is None:
        return None
    return Cast(Slot.W, target=target.id)


def _cmd_retreat(state: GameState, ts: TutorState) -> Command:
    return MoveTo(hero_spawn(state, state.units[ts.hero_id]))


def _cmd_follow(state: GameState, ts: TutorState) -> Command:
    partner = state.units.get(ts.partner)
    if partner is None or not partner.alive:
        return MoveTo(hero_spawn(state, state.units[ts.hero_id]))
    return MoveTo(follow_point(state, ts))


def _build_registry() -> bt.Registry:
    reg = bt.Registry()
    reg.predicate("team_heal_needed", _predicate(guard_team_heal))
    reg.predicate("cc_opportunity", _predicate(guard_crowd_control))
    reg.predicate("ally_needs_heal", _predicate(guard_ally_heal))
    reg.predicate("self_critical", _predicate(guard_self_retreat))
    reg.action("cast_team_heal", _action(1, _cmd_team_heal))
    reg.action("cast_crowd_control", _action(2, _cmd_crowd_control))
    reg.action("cast_heal", _action(3, _cmd_heal))
    reg.action("retreat_to_spawn", _action(4, _cmd_retreat))
    reg.action("follow_partner", _action(5, _cmd_follow))
    return reg


REGISTRY = _build_registry()


def default_tree() -> bt.BTNode:
    return bt.Selector((
        bt.Sequencer((bt.Condition("team_heal_needed"), bt.Action("cast_team_heal"))),
        bt.Sequencer((bt.Condition("cc_opportunity"), bt.Action("cast_crowd_control"))),
        bt.Sequencer((bt.Condition("ally_needs_heal"), bt.Action("cast_heal"))),
        bt.Sequencer((bt.Condition("self_critical"), bt.Action("retreat_to_spawn"))),
        bt.Action("follow_partner"),
    ))


def default_tree_path() -> Path:
    return Path(__file__).resolve().parent / "data" / "tutor_tree.json"


def decide(state: GameState, ts: TutorState) -> Decision:
    """Tick the tree once and return the chosen command with its branch."""
    hero = state.units.get(ts.hero_id)
    if hero is None or not hero.alive:
        raise TutorError("tutor hero is not alive")
    board = bt.Blackboard({"state": state, "tutor": ts})
    bt.tick(ts.tree, board, REGISTRY)
    if not board.requests:
        # A custom tree may fail every branch; the default tree never does.
        return Decision(state.tick, 0, Idle())
    branch, command = board.requests[0]
    return Decision(state.tick, branch, command)


def audit_priority(state: GameState, ts: TutorState, decision: Decision) -> list[int]:
    """Branches below the fired one whose guards hold; empty means sound."""
    limit = decision.branch if decision.branch > 0 else len(BRANCH_GUARDS) + 1
    return [i + 1 for i, guard in enumerate(BRANCH_GUARDS[:limit - 1]) if guard(state, ts)]
