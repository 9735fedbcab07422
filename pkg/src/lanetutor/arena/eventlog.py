"""Event-log and command codecs: JSON Lines, one record per line."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..geometry import Vec2
from .types import (
    Attack,
    Cast,
    Command,
    CommandRejected,
    Damage,
    Event,
    Idle,
    Kill,
    MatchEnd,
    MoveTo,
    Ping,
    PingEvent,
    PingKind,
    Slot,
    SpellCast,
    TipEmitted,
    TowerDestroyed,
)


class EventLogError(ValueError):
    """Raised for truncated or corrupt event logs; carries the line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def event_to_dict(event: Event) -> dict:
    if isinstance(event, Kill):
        return {"tick": event.tick, "type": "kill", "killer": event.killer,
                "victim": event.victim, "assists": list(event.assists)}
    if isinstance(event, Damage):
        return {"tick": event.tick, "type": "damage", "src": event.src,
                "dst": event.dst, "amount": event.amount}
    if isinstance(event, SpellCast):
        return {"tick": event.tick, "type": "spell_cast", "caster": event.caster,
                "slot": event.slot.value, "target": event.target,
                "pos": [event.pos.x, event.pos.y] if event.pos else None}
    if isinstance(event, TowerDestroyed):
        return {"tick": event.tick, "type": "tower_destroyed",
                "unit_id": event.unit_id, "by": event.by}
    if isinstance(event, PingEvent):
        return {"tick": event.tick, "type": "ping", "author": event.author,
                "pos": [event.pos.x, event.pos.y], "kind": event.kind.value}
    if isinstance(event, MatchEnd):
        return {"tick": event.tick, "type": "match_end",
                "winner": event.winner.value if event.winner else None}
    if isinstance(event, CommandRejected):
        return {"tick": event.tick, "type": "command_rejected",
                "hero": event.hero, "reason": event.reason}
    if isinstance(event, TipEmitted):
        return {"tick": event.tick, "type": "tip", "rule_id": event.rule_id,
                "recipients": list(event.recipients), "message": event.message,
                "ping": ({"kind": event.ping_kind.value,
                          "pos": [event.ping_pos.x, event.ping_pos.y]}
                         if event.ping_kind else None)}
    raise TypeError(f"unserializable event {event!r}")


def event_line(event: Event) -> str:
    return json.dumps(event_to_dict(event), sort_keys=True, separators=(",", ":"))


class EventLogWriter:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh = self.path.open("w", encoding="utf-8", newline="\n")

    def write(self, events: Iterable[Event]) -> None:
        for event in events:
            self._fh.write(event_line(event) + "\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "EventLogWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_event_dicts(path: str | Path) -> list[dict]:
    """Parse a JSONL event log into dicts, validating line by line."""
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                raise EventLogError("blank line in event log", lineno)
            try:
                d = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise EventLogError(f"invalid JSON ({exc.msg})", lineno) from None
            if not isinstance(d, dict) or "tick" not in d or "type" not in d:
                raise EventLogError("event must be an object with tick and type", lineno)
            out.append(d)
    return out


def command_to_dict(cmd: Command) -> dict:
    if isinstance(cmd, MoveTo):
        return {"kind": "move_to", "x": cmd.pos.x, "y": cmd.pos.y}
    if isinstance(cmd, Attack):
        return {"kind": "attack", "target": cmd.target}
    if isinstance(cmd, Cast):
        d: dict = {"kind": "cast", "slot": cmd.slot.value}
        if cmd.target is not None:
            d["target"] = cmd.target
        if cmd.pos is not None:
            d["x"], d["y"] = cmd.pos.x, cmd.pos.y
        return d
    if isinstance(cmd, Ping):
        return {"kind": "ping", "x": cmd.pos.x, "y": cmd.pos.y, "ping": cmd.kind.value}
    if isinstance(cmd, Idle):
        return {"kind": "idle"}
    raise TypeError(f"unserializable command {cmd!r}")


def command_from_dict(d: dict) -> Command:
    try:
        kind = d["kind"]
        if kind == "move_to":
            return MoveTo(Vec2(float(d["x"]), float(d["y"])))
        if kind == "attack":
            return Attack(int(d["target"]))
        if kind == "cast":
            pos = Vec2(float(d["x"]), float(d["y"])) if "x" in d else None
            target = int(d["target"]) if d.get("target") is not None else None
            return Cast(Slot(d["slot"]), target=target, pos=pos)
        if kind == "ping":
            return Ping(Vec2(float(d["x"]), float(d["y"])), PingKind(d["ping"]))
        if kind == "idle":
            return Idle()
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed command {d!r}: {exc}") from None
    raise ValueError(f"unknown command kind {d.get('kind')!r}")
