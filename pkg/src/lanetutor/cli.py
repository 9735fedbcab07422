"""Command-line entry point.

Subcommands: run (one headless match), experiment (batch + reports),
replay (verify a persisted log), serve (host a live match). Exit codes:
0 ok, 1 validation error, 2 runtime error. The only environment influence
is LANETUTOR_LOG, which sets log verbosity.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .analytics import render_report
from .arena.config import ConfigError, GameConfig, default_config_path, default_map, load_config_file
from .arena.eventlog import EventLogError
from .harness import (
    HarnessError,
    IntegrityError,
    load_experiment_spec,
    replay,
    run_experiment,
    run_match,
    verify_record,
)
from .tips import TipTableError, load_table

log = logging.getLogger("lanetutor")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

_VALIDATION_ERRORS = (ConfigError, HarnessError, TipTableError, ValueError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lanetutor")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="run one headless match")
    p_run.add_argument("--config", type=Path, help="ruleset JSON (defaults to the shipped one)")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--tutor", action="store_true", help="enable the support tutor")
    p_run.add_argument("--tips", type=Path, metavar="TABLE",
                       help="tip table JSON; implies a tutored match")
    p_run.add_argument("--out", type=Path, default=Path("runs"))

    p_exp = sub.add_parser("experiment", help="run an experiment spec")
    p_exp.add_argument("--spec", type=Path, required=True)
    p_exp.add_argument("--out", type=Path, required=True)

    p_rep = sub.add_parser("replay", help="recompute scorelines and checksum from a log")
    p_rep.add_argument("--log", type=Path, required=True)

    p_srv = sub.add_parser("serve", help="host a live match over WebSocket")
    p_srv.add_argument("--config", type=Path)
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--seed", type=int, default=0)
    p_srv.add_argument("--no-tutor", action="store_true")
    p_srv.add_argument("--tips", type=Path, metavar="TABLE")
    p_srv.add_argument("--snapshot-every", type=int, default=2)
    return parser


def _load_ruleset(path: Path | None):
    if path is None:
        path = default_config_path()
        if not path.exists():
            return GameConfig(), default_map()
    return load_config_file(path)


def _cmd_run(args) -> int:
    config, map_spec = _load_ruleset(args.config)
    if args.tips and not args.tutor:
        raise HarnessError("--tips requires --tutor")
    condition = "baseline"
    tip_table = None
    if args.tutor:
        condition = "support_only"
    if args.tips:
        condition = "support_plus_tips"
        tip_table = load_table(args.tips)
    record = run_match(config, map_spec, condition=condition, seed=args.seed,
                       tip_table=tip_table, out_dir=args.out)
    print(f"match {record.match_id}: winner={record.winner or 'none'} "
          f"duration={record.duration_ticks} ticks")
    for s in record.scorelines:
        print(f"  player {s.player}: {s.kills}/{s.deaths}/{s.assists} (KDA {s.kda:.6f})")
    print(f"record: {Path(args.out) / (record.match_id + '.record.json')}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    spec = load_experiment_spec(args.spec)
    result = run_experiment(spec, args.out)
    print(f"{len(result.records)} matches -> {result.csv_path}")
    for report in result.reports:
        label = f"{report.phase}/{report.condition}" if report.phase else report.condition
        print(f"  {label}: n={report.n} mean={report.mean:.6f} stddev={report.stddev:.6f}")
    if result.phase_report is not None:
        print(render_report(result.phase_report))
    return EXIT_OK


def _cmd_replay(args) -> int:
    result = replay(args.log)
    print(f"{result.events} events, checksum {result.checksum}")
    for s in result.scorelines:
        print(f"  player {s.player}: {s.kills}/{s.deaths}/{s.assists}")
    record_path = Path(str(args.log).replace(".events.jsonl", ".record.json"))
    if record_path.exists():
        problems = verify_record(record_path)
        if problems:
            for p in problems:
                print(f"MISMATCH: {p}", file=sys.stderr)
            return EXIT_RUNTIME
        print("record verified: scorelines and checksum match")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .server.app import ServerSettings, create_app

    config, map_spec = _load_ruleset(args.config)
    condition = "baseline" if args.no_tutor else "support_plus_tips"
    tip_table = load_table(args.tips) if args.tips else None
    if args.no_tutor and args.tips:
        raise HarnessError("--tips requires the tutor; drop --no-tutor")
    static_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    settings = ServerSettings(config=config, map_spec=map_spec, condition=condition,
                              seed=args.seed, snapshot_every=args.snapshot_every,
                              tip_table=tip_table,
                              static_dir=str(static_dir) if static_dir.is_dir() else None)
    app = create_app(settings)
    log.info("serving live match on %s:%d", args.host, args.port)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("LANETUTOR_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": _cmd_run, "experiment": _cmd_experiment,
                "replay": _cmd_replay, "serve": _cmd_serve}
    try:
        return handlers[args.cmd](args)
    except (EventLogError, IntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
