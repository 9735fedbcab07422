#!/usr/bin/env python3
"""Regenerate the shipped data files (ruleset, tutor tree, tip table,
wire schema) from their in-code definitions."""
from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from lanetutor.arena.config import GameConfig, default_map, save_config_file
from lanetutor.bt import save_tree
from lanetutor.server.schemas import message_schema
from lanetutor.tips import default_table, save_table
from lanetutor.tutor import default_tree


def main() -> None:
    data = Path(__file__).resolve().parents[1] / "src" / "lanetutor" / "data"
    data.mkdir(parents=True, exist_ok=True)
    save_config_file(data / "default_config.json", GameConfig(), default_map())
    save_tree(data / "tutor_tree.json", default_tree())
    save_table(data / "default_tips.json", default_table())
    (data / "messages.schema.json").write_text(
        json.dumps(message_schema(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for name in ("default_config.json", "tutor_tree.json",
                 "default_tips.json", "messages.schema.json"):
        print(f"wrote {data / name}")


if __name__ == "__main__":
    main()
