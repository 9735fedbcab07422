"""Headless experiment driver: match assembly, persistence, replay checks.

A MatchSession wires one arena match to its controllers (novice, tutor,
lane bots) and optionally the tip engine. The same session type backs both
headless batch runs and the live server; the only difference is whether the
partner hero is driven by the novice policy or by externally supplied
commands. Every run records its full per-tick command stream, so any match
can be re-simulated command-for-command and compared byte-for-byte.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import tips as tips_mod
from . import tutor as tutor_mod
from .analytics import (
    ExperimentReport,
    MatchRecord,
    ScoreLine,
    SeriesReport,
    aggregate,
    experiment_report,
    export_csv,
)
from .arena.config import GameConfig, MapSpec, config_hash, default_map
from .arena.eventlog import (
    EventLogError,
    command_from_dict,
    command_to_dict,
    event_line,
    event_to_dict,
    read_event_dicts,
)
from .arena.sim import GameState, new_match, step
from .arena.types import Command, Event, Team, TipEmitted
from .bt import BTNode
from .policies import LanePushPolicy, NoviceParams, NovicePolicy, Policy

CONDITIONS = ("baseline", "support_only", "support_plus_tips")


class HarnessError(ValueError):
    pass


class IntegrityError(ValueError):
    """A persisted match fails its replay or checksum verification."""


@dataclass
class MatchSession:
    """One running match plus its controllers and advisory wiring."""

    state: GameState
    condition: str
    novice_id: int
    tutor_state: tutor_mod.TutorState | None
    controllers: dict[int, Policy]
    tip_table: tips_mod.TipTable | None
    throttle: tips_mod.ThrottleState | None
    decision_trace: list[tutor_mod.Decision] = field(default_factory=list)
    priority_violations: list[tuple[int, int, list[int]]] = field(default_factory=list)
    command_stream: list[tuple[int, dict[int, Command]]] = field(default_factory=list)
    all_events: list[Event] | None = None  # populated when keep_events=True

    @property
    def partner_id(self) -> int:
        return self.novice_id

    def advance(self, external: dict[int, Command] | None = None) -> list[Event]:
        """Resolve one tick: evaluate tips on the current state, gather
        controller commands (the tutor and the tip engine observe the same
        snapshot), merge external ones, then step the arena."""
        state = self.state
        events: list[Event] = []
        if self.tip_table is not None:
            tip_events = tips_mod.evaluate(state, self.novice_id, self.tip_table, self.throttle)
            for te in tip_events:
                events.append(TipEmitted(te.tick, te.rule_id, te.recipients, te.message,
                                         te.ping_kind, te.ping_pos))
                for rid in te.recipients:
                    controller = self.controllers.get(rid)
                    if controller is not None:
                        controller.on_tip(state, te)
        commands: dict[int, Command] = {}
        for hid in sorted(self.controllers):
            if self.tutor_state is not None and hid == self.tutor_state.hero_id:
                hero = state.units[hid]
                if hero.alive:
                    decision = tutor_mod.decide(state, self.tutor_state)
                    self.decision_trace.append(decision)
                    offending = tutor_mod.audit_priority(state, self.tutor_state, decision)
                    if offending:
                        self.priority_violations.append((state.tick, decision.branch, offending))
                    commands[hid] = decision.command
                continue
            cmd = self.controllers[hid].command(state)
            if cmd is not None:
                commands[hid] = cmd
        if external:
            commands.update(external)
        self.command_stream.append((state.tick, dict(commands)))
        events.extend(step(state, commands))
        if self.all_events is not None:
            self.all_events.extend(events)
        return events

    def run_to_end(self) -> None:
        while not self.state.finished:
            self.advance()


def build_session(config: GameConfig, map_spec: MapSpec | None = None, *,
                  condition: str = "baseline", seed: int = 0,
                  novice: NoviceParams | None = None,
                  tutor_config: tutor_mod.TutorConfig | None = None,
                  tip_table: tips_mod.TipTable | None = None,
                  tree: BTNode | None = None,
                  novice_is_external: bool = False,
                  keep_events: bool = False) -> MatchSession:
    """Assemble a match for one experimental condition.

    The first blue hero (bot lane) is the novice/partner slot; with the
    support system enabled the second blue hero becomes the tutor, otherwise
    it stays a plain lane bot, keeping team size identical across conditions.
    """
    if condition not in CONDITIONS:
        raise HarnessError(f"unknown condition {condition!r}")
    with_tutor = condition != "baseline"
    with_tips = condition == "support_plus_tips"
    if with_tutor and config.heroes_per_team < 2:
        raise HarnessError("support conditions need at least 2 heroes per team")
    map_spec = map_spec or default_map()
    state = new_match(replace(config, rng_seed=seed), map_spec)
    blue = sorted(u.id for u in state.heroes(Team.BLUE))
    red = sorted(u.id for u in state.heroes(Team.RED))
    novice_id = blue[0]
    controllers: dict[int, Policy] = {}
    tutor_state = None
    if not novice_is_external:
        controllers[novice_id] = NovicePolicy(novice_id, novice or NoviceParams())
    if with_tutor:
        tutor_id = blue[1]
        tutor_state = tutor_mod.setup_tutor(state, tutor_id, tutor_config, tree)
        controllers[tutor_id] = _TutorMarker(tutor_id)
        laners = blue[2:]
    else:
        laners = blue[1:]
    for hid in laners + red:
        controllers[hid] = LanePushPolicy(hid)
    table = None
    if with_tips:
        table = tip_table or tips_mod.default_table()
    return MatchSession(
        state=state, condition=condition, novice_id=novice_id,
        tutor_state=tutor_state, controllers=controllers,
        tip_table=table,
        throttle=tips_mod.ThrottleState() if table is not None else None,
        all_events=[] if keep_events else None,
    )


class _TutorMarker(Policy):
    """Placeholder entry; the session drives the tutor via decide()."""

    def __init__(self, hero_id: int):
        self.hero_id = hero_id

    def command(self, state: GameState) -> Command | None:
        return None


# ---------------------------------------------------------------------------
# Persistence

def run_match(config: GameConfig, map_spec: MapSpec | None = None, *,
              condition: str = "baseline", seed: int = 0,
              novice: NoviceParams | None = None,
              tutor_config: tutor_mod.TutorConfig | None = None,
              tip_table: tips_mod.TipTable | None = None,
              tree: BTNode | None = None,
              out_dir: str | Path = "runs",
              match_id: str | None = None,
              phase: str | None = None) -> MatchRecord:
    """Run a match to its end and persist record, event log, command stream,
    and (with a tutor) the decision trace."""
    map_spec = map_spec or default_map()
    session = build_session(config, map_spec, condition=condition, seed=seed,
                            novice=novice, tutor_config=tutor_config,
                            tip_table=tip_table, tree=tree)
    match_id = match_id or f"{condition}-{seed}"
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    events_path = out / f"{match_id}.events.jsonl"
    hero_ids = sorted(u.id for u in session.state.heroes())
    tallies = {p: [0, 0, 0] for p in hero_ids}  # kills, deaths, assists
    with events_path.open("w", encoding="utf-8", newline="\n") as fh:
        while not session.state.finished:
            for event in session.advance():
                d = event_to_dict(event)
                fh.write(json.dumps(d, sort_keys=True, separators=(",", ":")) + "\n")
                if d["type"] == "kill":
                    if d["killer"] in tallies:
                        tallies[d["killer"]][0] += 1
                    if d["victim"] in tallies:
                        tallies[d["victim"]][1] += 1
                    for aid in d["assists"]:
                        if aid in tallies:
                            tallies[aid][2] += 1
    scorelines = tuple(ScoreLine(p, *tallies[p]) for p in hero_ids)
    record = MatchRecord(
        match_id=match_id, seed=seed, config_hash=config_hash(config, map_spec),
        condition=condition, duration_ticks=session.state.tick,
        winner=session.state.winner.value if session.state.winner else None,
        scorelines=scorelines, event_log=events_path.name,
        log_sha256=_file_sha256(events_path), phase=phase,
    )
    _write_command_stream(out / f"{match_id}.commands.jsonl", session.command_stream)
    if session.decision_trace:
        _write_decision_trace(out / f"{match_id}.decisions.jsonl", session.decision_trace)
    save_record(out / f"{match_id}.record.json", record)
    return record


def _file_sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_command_stream(path: Path, stream: list[tuple[int, dict[int, Command]]]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for tick, commands in stream:
            doc = {"tick": tick,
                   "commands": {str(hid): command_to_dict(c) for hid, c in commands.items()}}
            fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def read_command_stream(path: str | Path) -> list[tuple[int, dict[int, Command]]]:
    out = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        try:
            doc = json.loads(raw)
            out.append((doc["tick"], {int(h): command_from_dict(c)
                                      for h, c in doc["commands"].items()}))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise IntegrityError(f"command stream line {lineno}: {exc}") from None
    return out


def _write_decision_trace(path: Path, trace: list[tutor_mod.Decision]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for d in trace:
            doc = {"tick": d.tick, "branch": d.branch, "command": command_to_dict(d.command)}
            fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def save_record(path: str | Path, record: MatchRecord) -> None:
    doc = {
        "match_id": record.match_id, "seed": record.seed,
        "config_hash": record.config_hash, "condition": record.condition,
        "phase": record.phase, "duration_ticks": record.duration_ticks,
        "winner": record.winner,
        "scorelines": [{"player": s.player, "kills": s.kills, "deaths": s.deaths,
                        "assists": s.assists} for s in record.scorelines],
        "event_log": record.event_log, "log_sha256": record.log_sha256,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_record(path: str | Path) -> MatchRecord:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return MatchRecord(
        match_id=doc["match_id"], seed=doc["seed"], config_hash=doc["config_hash"],
        condition=doc["condition"], duration_ticks=doc["duration_ticks"],
        winner=doc["winner"],
        scorelines=tuple(ScoreLine(s["player"], s["kills"], s["deaths"], s["assists"])
                         for s in doc["scorelines"]),
        event_log=doc["event_log"], log_sha256=doc["log_sha256"],
        phase=doc.get("phase"),
    )


# ---------------------------------------------------------------------------
# Replay verification

@dataclass(frozen=True, slots=True)
class ReplayResult:
    scorelines: tuple[ScoreLine, ...]
    checksum: str
    events: int


def replay(log_path: str | Path) -> ReplayResult:
    """Recompute scorelines and the log checksum from a persisted event log."""
    path = Path(log_path)
    events = read_event_dicts(path)
    players = sorted({pid for ev in events if ev["type"] == "kill"
                      for pid in [ev["killer"], ev["victim"], *ev["assists"]]})
    return ReplayResult(
        scorelines=scorelines_from(events, players),
        checksum=_file_sha256(path),
        events=len(events),
    )


def scorelines_from(events: list[dict], players: list[int]) -> tuple[ScoreLine, ...]:
    from .analytics import scorelines_from_events
    return scorelines_from_events(events, players)


def verify_record(record_path: str | Path) -> list[str]:
    """Replay a persisted match against its record; returns mismatch notes
    (empty when the record verifies)."""
    record_path = Path(record_path)
    record = load_record(record_path)
    log_path = record_path.parent / record.event_log
    try:
        result = replay(log_path)
    except EventLogError as exc:
        return [str(exc)]
    problems = []
    if result.checksum != record.log_sha256:
        problems.append(f"checksum mismatch: log {result.checksum} != record {record.log_sha256}")
    recomputed = {s.player: s for s in result.scorelines}
    for stored in record.scorelines:
        got = recomputed.get(stored.player, ScoreLine(stored.player, 0, 0, 0))
        if (got.kills, got.deaths, got.assists) != (stored.kills, stored.deaths, stored.assists):
            problems.append(f"scoreline mismatch for player {stored.player}: "
                            f"log {got} != record {stored}")
    return problems


def replay_command_stream(config: GameConfig, map_spec: MapSpec, seed: int,
                          stream: list[tuple[int, dict[int, Command]]], *,
                          condition: str = "baseline",
                          tip_table: tips_mod.TipTable | None = None,
                          partner: int | None = None) -> list[str]:
    """Re-simulate a recorded command stream and return the event-log lines.

    Controllers never run; the recorded commands already include their
    output. Tips re-evaluate deterministically when a table is given.
    """
    state = new_match(replace(config, rng_seed=seed), map_spec)
    partner_id = partner if partner is not None else sorted(
        u.id for u in state.heroes(Team.BLUE))[0]
    if condition != "baseline":
        blue = sorted(u.id for u in state.heroes(Team.BLUE))
        tutor_mod.setup_tutor(state, blue[1])
    throttle = tips_mod.ThrottleState() if tip_table is not None else None
    lines: list[str] = []
    for _, commands in stream:
        if state.finished:
            break
        if tip_table is not None:
            for te in tips_mod.evaluate(state, partner_id, tip_table, throttle):
                lines.append(event_line(TipEmitted(te.tick, te.rule_id, te.recipients,
                                                   te.message, te.ping_kind, te.ping_pos)))
        lines.extend(event_line(e) for e in step(state, commands))
    return lines


# ---------------------------------------------------------------------------
# Experiments

@dataclass(frozen=True, slots=True)
class PhaseSpec:
    phase: str
    condition: str
    matches: int
    novice: NoviceParams


@dataclass(frozen=True)
class ExperimentSpec:
    conditions: tuple[str, ...] = CONDITIONS
    matches_per_condition: int = 3
    novice: NoviceParams = field(default_factory=NoviceParams)
    base_seed: int = 1
    config_path: str | None = None
    tips_path: str | None = None
    tree_path: str | None = None
    phases: tuple[PhaseSpec, ...] = ()

    def validate(self) -> None:
        if self.matches_per_condition < 1:
            raise HarnessError("matches_per_condition must be >= 1")
        for c in self.conditions:
            if c not in CONDITIONS:
                raise HarnessError(f"unknown condition {c!r}")
        for p in self.phases:
            if p.phase not in ("before", "with_tutor", "after"):
                raise HarnessError(f"unknown phase {p.phase!r}")
            if p.condition not in CONDITIONS:
                raise HarnessError(f"unknown condition {p.condition!r} in phase {p.phase}")
            if p.matches < 1:
                raise HarnessError("phase matches must be >= 1")
        self.novice.validate()


def experiment_spec_from_dict(doc: dict) -> ExperimentSpec:
    allowed = {"conditions", "matches_per_condition", "novice", "base_seed",
               "config_path", "tips_path", "tree_path", "phases"}
    unknown = set(doc) - allowed
    if unknown:
        raise HarnessError(f"unknown field(s) in experiment spec: {', '.join(sorted(unknown))}")

    def novice_from(d: dict | None) -> NoviceParams:
        if d is None:
            return NoviceParams()
        bad = set(d) - {"reaction_delay", "retreat_threshold", "positioning_error",
                        "aggression", "tip_compliance"}
        if bad:
            raise HarnessError(f"unknown novice field(s): {', '.join(sorted(bad))}")
        return NoviceParams(**d)

    phases = tuple(
        PhaseSpec(phase=p["phase"], condition=p.get("condition", "baseline"),
                  matches=p.get("matches", 1), novice=novice_from(p.get("novice")))
        for p in doc.get("phases", ())
    )
    spec = ExperimentSpec(
        conditions=tuple(doc.get("conditions", CONDITIONS)),
        matches_per_condition=doc.get("matches_per_condition", 3),
        novice=novice_from(doc.get("novice")),
        base_seed=doc.get("base_seed", 1),
        config_path=doc.get("config_path"),
        tips_path=doc.get("tips_path"),
        tree_path=doc.get("tree_path"),
        phases=phases,
    )
    spec.validate()
    return spec


def load_experiment_spec(path: str | Path) -> ExperimentSpec:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise HarnessError(f"experiment spec is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise HarnessError("experiment spec must be a JSON object")
    return experiment_spec_from_dict(doc)


@dataclass(frozen=True)
class ExperimentResult:
    records: tuple[MatchRecord, ...]
    reports: tuple[SeriesReport, ...]
    novice_id: int
    csv_path: str
    phase_report: ExperimentReport | None = None


def run_experiment(spec: ExperimentSpec, out_dir: str | Path,
                   config: GameConfig | None = None,
                   map_spec: MapSpec | None = None) -> ExperimentResult:
    """Run every condition with seeds base_seed + i, aggregate the novice's
    KDA per condition, and write reports/report.csv."""
    spec.validate()
    if config is None:
        from .arena.config import load_config_file
        if spec.config_path:
            config, map_spec = load_config_file(spec.config_path)
        else:
            config = GameConfig()
    map_spec = map_spec or default_map()
    tip_table = tips_mod.load_table(spec.tips_path) if spec.tips_path else None
    tree = None
    if spec.tree_path:
        from .bt import load_tree
        tree = load_tree(spec.tree_path, tutor_mod.REGISTRY)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records: list[MatchRecord] = []
    novice_id: int | None = None
    for condition in spec.conditions:
        for i in range(spec.matches_per_condition):
            seed = spec.base_seed + i
            record = run_match(config, map_spec, condition=condition, seed=seed,
                               novice=spec.novice, tip_table=tip_table, tree=tree,
                               out_dir=out, match_id=f"{condition}-{seed}")
            records.append(record)
            if novice_id is None:
                novice_id = min(s.player for s in record.scorelines)
    phase_records: list[MatchRecord] = []
    seed_cursor = spec.base_seed + spec.matches_per_condition
    for p in spec.phases:
        for i in range(p.matches):
            seed = seed_cursor + i
            record = run_match(config, map_spec, condition=p.condition, seed=seed,
                               novice=p.novice, tip_table=tip_table, tree=tree,
                               out_dir=out, match_id=f"{p.phase}-{p.condition}-{seed}",
                               phase=p.phase)
            phase_records.append(record)
        seed_cursor += p.matches
    assert novice_id is not None or phase_records, "experiment produced no matches"
    if novice_id is None:
        novice_id = min(s.player for s in phase_records[0].scorelines)
    reports = []
    for condition in spec.conditions:
        series = [r for r in records if r.condition == condition]
        if series:
            reports.append(aggregate(series, novice_id))
    phase_rep = experiment_report(phase_records, novice_id) if phase_records else None
    if phase_rep is not None:
        reports.extend(phase_rep.rows)
    csv_path = out / "report.csv"
    export_csv(csv_path, reports)
    return ExperimentResult(records=tuple(records + phase_records),
                            reports=tuple(reports), novice_id=novice_id,
                            csv_path=str(csv_path), phase_report=phase_rep)
