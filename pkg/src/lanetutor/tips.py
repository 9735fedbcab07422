"""Rule-based advisory engine: a lookup table of triggers -> messages/pings.

Evaluation is pure over a state snapshot; firing is throttled per
(rule, recipient) so advice arrives at a digestible rate. Partner-scope
rules watch the tutored player only; team-scope rules watch every allied
hero and address whichever of them is in trouble.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .arena.sim import GameState
from .arena.types import PingKind, Unit, UnitKind
from .geometry import Vec2


class TipTableError(ValueError):
    pass


class TipScope(str, Enum):
    PARTNER = "partner"
    TEAM = "team"


class PingAnchor(str, Enum):
    PARTNER_POS = "partner_pos"
    THREAT_POS = "threat_pos"


@dataclass(frozen=True, slots=True)
class LowHealth:
    frac: float


@dataclass(frozen=True, slots=True)
class InTowerRange:
    pass


@dataclass(frozen=True, slots=True)
class EnemyFocus:
    radius: float
    min_count: int


@dataclass(frozen=True, slots=True)
class MinionAggro:
    min_count: int


TriggerSpec = LowHealth | InTowerRange | EnemyFocus | MinionAggro


@dataclass(frozen=True, slots=True)
class TipRule:
    id: str
    trigger: TriggerSpec
    message: str
    ping: PingKind | None
    anchor: PingAnchor
    scope: TipScope
    cooldown: int


@dataclass(frozen=True, slots=True)
class TipEvent:
    tick: int
    rule_id: str
    recipients: tuple[int, ...]
    message: str
    ping_kind: PingKind | None
    ping_pos: Vec2 | None


@dataclass(frozen=True, slots=True)
class TipTable:
    rules: tuple[TipRule, ...]


class ThrottleState:
    """Last-fired tick per (rule id, recipient id)."""

    def __init__(self):
        self.last_fired: dict[tuple[str, int], int] = {}

    def ready(self, rule: TipRule, recipient: int, tick: int) -> bool:
        last = self.last_fired.get((rule.id, recipient))
        return last is None or tick - last >= rule.cooldown

    def mark(self, rule: TipRule, recipient: int, tick: int) -> None:
        self.last_fired[(rule.id, recipient)] = tick


# ---------------------------------------------------------------------------
# Trigger evaluation

def trigger_holds(spec: TriggerSpec, state: GameState, subject_id: int) -> bool:
    subject = state.units[subject_id]
    if isinstance(spec, LowHealth):
        return subject.hp_frac < spec.frac
    if isinstance(spec, InTowerRange):
        return _threatening_tower(state, subject) is not None
    if isinstance(spec, EnemyFocus):
        r_sq = spec.radius * spec.radius
        count = sum(1 for u in state.heroes(subject.team.opponent)
                    if u.alive and u.pos.dist_sq(subject.pos) <= r_sq)
        return count >= spec.min_count
    if isinstance(spec, MinionAggro):
        count = sum(1 for u in state.units.values()
                    if u.kind is UnitKind.MINION and u.alive
                    and u.team is not subject.team and u.attack_target == subject_id)
        return count >= spec.min_count
    raise TypeError(f"unknown trigger {spec!r}")


def _threatening_tower(state: GameState, subject: Unit) -> Unit | None:
    """An enemy tower whose range covers the subject while the tower either
    already targets them or has no minion screen to shoot instead."""
    best: Unit | None = None
    for tower in state.units.values():
        if tower.kind is not UnitKind.TOWER or not tower.alive or tower.team is subject.team:
            continue
        r_sq = tower.attack.range * tower.attack.range
        if tower.pos.dist_sq(subject.pos) > r_sq:
            continue
        if tower.attack_target != subject.id:
            screened = any(u.kind is UnitKind.MINION and u.alive and u.team is subject.team
                           and tower.pos.dist_sq(u.pos) <= r_sq
                           for u in state.units.values())
            if screened:
                continue
        if best is None or tower.pos.dist_sq(subject.pos) < best.pos.dist_sq(subject.pos):
            best = tower
    return best


def _anchor_pos(rule: TipRule, state: GameState, subject: Unit) -> Vec2:
    if rule.anchor is PingAnchor.PARTNER_POS:
        return subject.pos
    spec = rule.trigger
    if isinstance(spec, InTowerRange):
        tower = _threatening_tower(state, subject)
        return tower.pos if tower is not None else subject.pos
    if isinstance(spec, EnemyFocus):
        r_sq = spec.radius * spec.radius
        near = [u for u in state.heroes(subject.team.opponent)
                if u.alive and u.pos.dist_sq(subject.pos) <= r_sq]
        if near:
            return min(near, key=lambda u: (u.pos.dist_sq(subject.pos), u.id)).pos
    if isinstance(spec, MinionAggro):
        aggro = [u for u in state.units.values()
                 if u.kind is UnitKind.MINION and u.alive
                 and u.team is not subject.team and u.attack_target == subject.id]
        if aggro:
            return min(aggro, key=lambda u: (u.pos.dist_sq(subject.pos), u.id)).pos
    return subject.pos


def evaluate(state: GameState, partner: int, table: TipTable,
             throttle: ThrottleState | None) -> list[TipEvent]:
    """Fire every rule whose trigger holds for its scope's subjects and whose
    throttle window has elapsed. Pass throttle=None to disable throttling."""
    partner_unit = state.units.get(partner)
    if partner_unit is None:
        raise TipTableError(f"partner {partner} not in match")
    events: list[TipEvent] = []
    tick = state.tick
    for rule in table.rules:
        if rule.scope is TipScope.PARTNER:
            subjects = [partner_unit] if partner_unit.alive else []
        else:
            subjects = [u for u in state.heroes(partner_unit.team) if u.alive]
        for subject in subjects:
            if throttle is not None and not throttle.ready(rule, subject.id, tick):
                continue
            if not trigger_holds(rule.trigger, state, subject.id):
                continue
            ping_pos = None
            if rule.ping is not None:
                ping_pos = _anchor_pos(rule, state, subject).clamped(0, state.map.size)
            events.append(TipEvent(tick, rule.id, (subject.id,), rule.message,
                                   rule.ping, ping_pos))
            if throttle is not None:
                throttle.mark(rule, subject.id, tick)
    return events


# ---------------------------------------------------------------------------
# Table loading

_TRIGGER_KINDS = {"low_health", "in_tower_range", "enemy_focus", "minion_aggro"}


def default_table() -> TipTable:
    return TipTable(rules=(
        TipRule("low_health", LowHealth(0.35),
                "Low health! Back off and recover before you re-engage.",
                PingKind.DANGER, PingAnchor.PARTNER_POS, TipScope.PARTNER, 200),
        TipRule("tower_danger", InTowerRange(),
                "You're in tower range without a minion screen. Step back before it fires.",
                PingKind.CAUTION, PingAnchor.THREAT_POS, TipScope.TEAM, 160),
        TipRule("enemy_focus", EnemyFocus(80.0, 2),
                "Several enemies are collapsing on you. Fall back toward your team.",
                PingKind.DANGER, PingAnchor.THREAT_POS, TipScope.TEAM, 160),
        TipRule("creep_aggro", MinionAggro(3),
                "The minion wave turned on you. Walk back and let your own wave tank.",
                PingKind.CAUTION, PingAnchor.THREAT_POS, TipScope.PARTNER, 240),
    ))


def default_table_path() -> Path:
    return Path(__file__).resolve().parent / "data" / "default_tips.json"


def rule_to_dict(rule: TipRule) -> dict:
    trig = rule.trigger
    if isinstance(trig, LowHealth):
        trigger = {"kind": "low_health", "frac": trig.frac}
    elif isinstance(trig, InTowerRange):
        trigger = {"kind": "in_tower_range"}
    elif isinstance(trig, EnemyFocus):
        trigger = {"kind": "enemy_focus", "radius": trig.radius, "min_count": trig.min_count}
    else:
        trigger = {"kind": "minion_aggro", "min_count": trig.min_count}
    return {
        "id": rule.id,
        "trigger": trigger,
        "message": rule.message,
        "ping": {"kind": rule.ping.value if rule.ping else "none", "anchor": rule.anchor.value},
        "scope": rule.scope.value,
        "cooldown": rule.cooldown,
    }


def _rule_from_dict(d: dict, where: str) -> TipRule:
    def fail(msg: str) -> TipTableError:
        return TipTableError(f"{where}: {msg}")

    if not isinstance(d, dict):
        raise fail("rule must be an object")
    rule_id = d.get("id")
    if not isinstance(rule_id, str) or not rule_id:
        raise fail("missing or empty rule id")
    unknown = set(d) - {"id", "trigger", "message", "ping", "scope", "cooldown"}
    if unknown:
        raise fail(f"unknown field(s): {', '.join(sorted(unknown))}")
    trig = d.get("trigger") or {}
    kind = trig.get("kind")
    if kind not in _TRIGGER_KINDS:
        raise fail(f"unknown trigger kind {kind!r}")
    try:
        if kind == "low_health":
            frac = float(trig["frac"])
            if not 0 < frac < 1:
                raise fail("low_health frac must lie in (0, 1)")
            trigger: TriggerSpec = LowHealth(frac)
        elif kind == "in_tower_range":
            trigger = InTowerRange()
        elif kind == "enemy_focus":
            radius, min_count = float(trig["radius"]), int(trig["min_count"])
            if radius <= 0 or min_count < 1:
                raise fail("enemy_focus needs radius > 0 and min_count >= 1")
            trigger = EnemyFocus(radius, min_count)
        else:
            min_count = int(trig["min_count"])
            if min_count < 1:
                raise fail("minion_aggro needs min_count >= 1")
            trigger = MinionAggro(min_count)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TipTableError):
            raise
        raise fail(f"malformed trigger parameters ({exc})") from None
    message = d.get("message")
    if not isinstance(message, str) or not message:
        raise fail("message must be a non-empty string")
    ping_spec = d.get("ping") or {"kind": "none", "anchor": "partner_pos"}
    ping_kind_name = ping_spec.get("kind", "none")
    ping = None if ping_kind_name == "none" else PingKind(ping_kind_name)
    try:
        anchor = PingAnchor(ping_spec.get("anchor", "partner_pos"))
        scope = TipScope(d.get("scope", "partner"))
    except ValueError as exc:
        raise fail(str(exc)) from None
    cooldown = d.get("cooldown")
    if not isinstance(cooldown, int) or cooldown <= 0:
        raise fail("cooldown must be a positive integer")
    return TipRule(rule_id, trigger, message, ping, anchor, scope, cooldown)


def table_from_list(doc: list) -> TipTable:
    if not isinstance(doc, list):
        raise TipTableError("tip table must be a JSON list of rules")
    rules = []
    seen: set[str] = set()
    for i, entry in enumerate(doc):
        rid = entry.get("id") if isinstance(entry, dict) else None
        where = f"rule #{i + 1}" + (f" (id {rid!r})" if rid else "")
        rule = _rule_from_dict(entry, where)
        if rule.id in seen:
            raise TipTableError(f"{where}: duplicate rule id {rule.id!r}")
        seen.add(rule.id)
        rules.append(rule)
    return TipTable(rules=tuple(rules))


def load_table(path: str | Path) -> TipTable:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TipTableError(f"tip table is not valid JSON at line {exc.lineno}: {exc.msg}") from None
    except OSError as exc:
        raise TipTableError(f"cannot read tip table: {exc}") from None
    return table_from_list(doc)


def save_table(path: str | Path, table: TipTable) -> None:
    doc = [rule_to_dict(rule) for rule in table.rules]
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
