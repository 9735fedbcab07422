"""Scripted hero controllers for headless matches.

The novice stands in for the human learner: sluggish reactions, positional
jitter, a late self-preservation instinct, and an optional willingness to
act on tips. Lane bots fill every other slot, in the spirit of beatable
co-op AI opponents. All randomness comes from the match's seeded generator,
so a (config, seed) pair fully determines a match.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arena.sim import GameState, hero_spawn, minion_path
from .arena.types import Attack, Command, MoveTo, Unit, UnitKind
from .geometry import Vec2
from .tips import TipEvent

# The novice leaves retreat mode once healed back to this fraction, but
# always backs off for the minimum hold first (positioning tips fire at
# full health; the point is to leave the danger zone, not to heal).
_RETREAT_RECOVER_FRAC = 0.6
_RETREAT_MIN_HOLD = 40
_RETREAT_TIMEOUT = 400


@dataclass(frozen=True, slots=True)
class NoviceParams:
    reaction_delay: int = 10
    retreat_threshold: float = 0.12
    positioning_error: float = 6.0
    aggression: float = 0.30
    tip_compliance: float = 0.0

    def validate(self) -> None:
        if self.reaction_delay < 0:
            raise ValueError("reaction_delay must be >= 0")
        if self.positioning_error < 0:
            raise ValueError("positioning_error must be >= 0")
        for name in ("retreat_threshold", "aggression", "tip_compliance"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


class Policy:
    """Per-tick controller for one hero."""

    def command(self, state: GameState) -> Command | None:
        raise NotImplementedError

    def on_tip(self, state: GameState, event: TipEvent) -> None:
        pass


class FunctionPolicy(Policy):
    def __init__(self, hero_id: int, fn):
        self.hero_id = hero_id
        self.fn = fn

    def command(self, state: GameState) -> Command | None:
        return self.fn(state, self.hero_id)


class LanePushPolicy(Policy):
    """Walk the assigned lane, hit whatever crosses the path, never retreat."""

    def __init__(self, hero_id: int, engage_radius: float = 28.0,
                 hero_focus_radius: float = 20.0):
        self.hero_id = hero_id
        self.engage_radius = engage_radius
        self.hero_focus_radius = hero_focus_radius
        self.waypoint_index = 0
        self._was_dead = False

    def command(self, state: GameState) -> Command | None:
        hero = state.units[self.hero_id]
        if not hero.alive:
            self._was_dead = True
            return None
        if self._was_dead:
            self.waypoint_index = 0
            self._was_dead = False
        target = self._pick_target(state, hero)
        if target is not None:
            return Attack(target.id)
        path = minion_path(state, hero)
        while (self.waypoint_index < len(path) - 1
               and hero.pos.dist(path[self.waypoint_index]) <= 3.0):
            self.waypoint_index += 1
        return MoveTo(path[self.waypoint_index])

    def _pick_target(self, state: GameState, hero: Unit) -> Unit | None:
        focus_sq = self.hero_focus_radius ** 2
        engage_sq = self.engage_radius ** 2
        best_hero = None
        best_other = None
        for u in state.units.values():
            if not u.alive or u.team is hero.team:
                continue
            d_sq = hero.pos.dist_sq(u.pos)
            if u.kind is UnitKind.HERO:
                if d_sq <= focus_sq and (best_hero is None or d_sq < best_hero[0]):
                    best_hero = (d_sq, u)
            elif d_sq <= engage_sq and (best_other is None or d_sq < best_other[0]):
                best_other = (d_sq, u)
        if best_hero is not None:
            return best_hero[1]
        return best_other[1] if best_other is not None else None


class NovicePolicy(Policy):
    """The simulated learner. Reacts on a delay, jitters its positioning,
    retreats late on its own, and earlier when it follows a tip."""

    RETREAT_TIP_RULES = ("low_health", "tower_danger")

    def __init__(self, hero_id: int, params: NoviceParams):
        params.validate()
        self.hero_id = hero_id
        self.params = params
        self.waypoint_index = 0
        self.retreating_until: int | None = None
        self.retreat_entered_at = 0
        self.pending_retreat_at: int | None = None
        self.next_decision_tick = 0
        self.last_command: Command | None = None
        self._was_dead = False

    def on_tip(self, state: GameState, event: TipEvent) -> None:
        if event.rule_id not in self.RETREAT_TIP_RULES:
            return
        if self.retreating_until is not None or self.pending_retreat_at is not None:
            return
        compliance = self.params.tip_compliance
        if compliance <= 0.0:
            # Ignored tips must not touch the rng stream, so a non-compliant
            # run evolves exactly like one with tips disabled.
            return
        if compliance >= 1.0 or state.rng.random() < compliance:
            # Tips land after this tick's commands were issued, so the first
            # chance to act is the next tick; keep the reaction inside the
            # promised delay window.
            delay = state.rng.randint(0, max(0, self.params.reaction_delay - 1))
            self.pending_retreat_at = state.tick + delay

    def command(self, state: GameState) -> Command | None:
        hero = state.units[self.hero_id]
        if not hero.alive:
            self._was_dead = True
            self.retreating_until = None
            self.pending_retreat_at = None
            self.last_command = None
            return None
        if self._was_dead:
            self.waypoint_index = 0
            self.next_decision_tick = state.tick
            self._was_dead = False
        t = state.tick
        if self.pending_retreat_at is not None and t >= self.pending_retreat_at:
            self.pending_retreat_at = None
            self.retreating_until = t + _RETREAT_TIMEOUT
            self.retreat_entered_at = t
        if self.retreating_until is None and hero.hp_frac < self.params.retreat_threshold:
            self.retreating_until = t + _RETREAT_TIMEOUT
            self.retreat_entered_at = t
        if self.retreating_until is not None:
            recovered = (hero.hp_frac >= _RETREAT_RECOVER_FRAC
                         and t - self.retreat_entered_at >= _RETREAT_MIN_HOLD)
            if recovered or t >= self.retreating_until:
                self.retreating_until = None
            else:
                self.last_command = MoveTo(hero_spawn(state, hero))
                self.next_decision_tick = t + max(1, self.params.reaction_delay)
                return self.last_command
        if t < self.next_decision_tick and self.last_command is not None:
            return self.last_command
        self.next_decision_tick = t + max(1, self.params.reaction_delay)
        self.last_command = self._decide(state, hero)
        return self.last_command

    def _decide(self, state: GameState, hero: Unit) -> Command:
        rng = state.rng
        sight_sq = 40.0 * 40.0
        enemy_heroes = []
        enemy_minions = []
        for u in state.units.values():
            if not u.alive or u.team is hero.team:
                continue
            d_sq = hero.pos.dist_sq(u.pos)
            if d_sq > sight_sq:
                continue
            if u.kind is UnitKind.HERO:
                enemy_heroes.append((d_sq, u.id))
            elif u.kind is UnitKind.MINION:
                enemy_minions.append((d_sq, u.id))
        if enemy_heroes and rng.random() < self.params.aggression:
            return Attack(min(enemy_heroes)[1])
        if enemy_minions:
            return Attack(min(enemy_minions)[1])
        path = minion_path(state, hero)
        while (self.waypoint_index < len(path) - 1
               and hero.pos.dist(path[self.waypoint_index]) <= 4.0):
            self.waypoint_index += 1
        goal = path[self.waypoint_index]
        err = self.params.positioning_error
        if err > 0:
            goal = Vec2(goal.x + rng.gauss(0.0, err), goal.y + rng.gauss(0.0, err))
        return MoveTo(goal.clamped(0, state.map.size))
