"""Behavior-tree engine: sequencers, selectors, conditions, actions.

Trees are immutable and re-evaluated from the root every engine tick; there
is no resumption memory. Running propagates like Failure inside a Sequencer
and like Success inside a Selector. Conditions and actions are looked up by
key in a Registry, so tree topology can live in a JSON file.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, auto
from pathlib import Path
from typing import Any, Callable


class BtError(Exception):
    pass


class Status(Enum):
    SUCCESS = auto()
    FAILURE = auto()
    RUNNING = auto()


@dataclass(frozen=True, slots=True)
class Sequencer:
    children: tuple["BTNode", ...]


@dataclass(frozen=True, slots=True)
class Selector:
    children: tuple["BTNode", ...]


@dataclass(frozen=True, slots=True)
class Condition:
    key: str


@dataclass(frozen=True, slots=True)
class Action:
    key: str


BTNode = Sequencer | Selector | Condition | Action


class Blackboard:
    """Per-tick read view of the world plus an output buffer.

    Keys are read-only during a tick; at most one action request may be
    emitted per tree tick.
    """

    def __init__(self, data: dict[str, Any] | None = None):
        self._data = dict(data or {})
        self.requests: list[Any] = []

    def __getitem__(self, key: str) -> Any:
        return self._data[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self._data.get(key, default)

    def emit(self, request: Any) -> None:
        if self.requests:
            raise BtError("an action request was already emitted this tick")
        self.requests.append(request)


class Registry:
    """Named predicates (Blackboard -> bool) and actions (Blackboard -> Status)."""

    def __init__(self):
        self.predicates: dict[str, Callable[[Blackboard], bool]] = {}
        self.actions: dict[str, Callable[[Blackboard], Status]] = {}

    def predicate(self, key: str, fn: Callable[[Blackboard], bool]) -> None:
        self.predicates[key] = fn

    def action(self, key: str, fn: Callable[[Blackboard], Status]) -> None:
        self.actions[key] = fn


def tick(tree: BTNode, board: Blackboard, registry: Registry) -> Status:
    """Evaluate the whole tree once. Clears the board's request buffer first."""
    board.requests.clear()
    return _tick(tree, board, registry)


def _tick(node: BTNode, board: Blackboard, registry: Registry) -> Status:
    if isinstance(node, Sequencer):
        if not node.children:
            raise BtError("sequencer with no children")
        for child in node.children:
            status = _tick(child, board, registry)
            if status is not Status.SUCCESS:
                return status
        return Status.SUCCESS
    if isinstance(node, Selector):
        if not node.children:
            raise BtError("selector with no children")
        for child in node.children:
            status = _tick(child, board, registry)
            if status is not Status.FAILURE:
                return status
        return Status.FAILURE
    if isinstance(node, Condition):
        fn = registry.predicates.get(node.key)
        if fn is None:
            raise BtError(f"unregistered predicate key {node.key!r}")
        return Status.SUCCESS if fn(board) else Status.FAILURE
    if isinstance(node, Action):
        fn = registry.actions.get(node.key)
        if fn is None:
            raise BtError(f"unregistered action key {node.key!r}")
        status = fn(board)
        if not isinstance(status, Status):
            raise BtError(f"action {node.key!r} returned {status!r}, not a Status")
        return status
    raise BtError(f"unknown node type {type(node).__name__}")


def validate(tree: BTNode, registry: Registry) -> list[str]:
    """Collect every unregistered key and every empty composite. Empty list
    means the tree is safe to tick against this registry."""
    errors: list[str] = []
    _validate(tree, registry, errors)
    return errors


def _validate(node: BTNode, registry: Registry, errors: list[str]) -> None:
    if isinstance(node, (Sequencer, Selector)):
        kind = "sequencer" if isinstance(node, Sequencer) else "selector"
        if not node.children:
            errors.append(f"empty {kind}")
        for child in node.children:
            _validate(child, registry, errors)
    elif isinstance(node, Condition):
        if node.key not in registry.predicates:
            errors.append(f"unregistered predicate key {node.key!r}")
    elif isinstance(node, Action):
        if node.key not in registry.actions:
            errors.append(f"unregistered action key {node.key!r}")
    else:
        errors.append(f"unknown node type {type(node).__name__}")


# ---------------------------------------------------------------------------
# JSON tree files: nested {type, key?, children?} records

def node_to_dict(node: BTNode) -> dict:
    if isinstance(node, Sequencer):
        return {"type": "sequencer", "children": [node_to_dict(c) for c in node.children]}
    if isinstance(node, Selector):
        return {"type": "selector", "children": [node_to_dict(c) for c in node.children]}
    if isinstance(node, Condition):
        return {"type": "condition", "key": node.key}
    return {"type": "action", "key": node.key}


def node_from_dict(d: dict) -> BTNode:
    try:
        kind = d["type"]
    except (TypeError, KeyError):
        raise BtError("tree node must be an object with a 'type' field") from None
    if kind in ("sequencer", "selector"):
        children = tuple(node_from_dict(c) for c in d.get("children", []))
        return Sequencer(children) if kind == "sequencer" else Selector(children)
    if kind in ("condition", "action"):
        key = d.get("key")
        if not isinstance(key, str) or not key:
            raise BtError(f"{kind} node needs a non-empty string 'key'")
        return Condition(key) if kind == "condition" else Action(key)
    raise BtError(f"unknown tree node type {kind!r}")


def load_tree(path: str | Path, registry: Registry | None = None) -> BTNode:
    """Load a tree definition file; structural defects fail here, and key
    defects too when a registry is supplied."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BtError(f"tree file is not valid JSON: {exc}") from None
    tree = node_from_dict(doc)
    structural = [e for e in _structural_errors(tree)]
    if structural:
        raise BtError("; ".join(structural))
    if registry is not None:
        errors = validate(tree, registry)
        if errors:
            raise BtError("; ".join(errors))
    return tree


def _structural_errors(node: BTNode) -> list[str]:
    errors: list[str] = []
    if isinstance(node, (Sequencer, Selector)):
        if not node.children:
            errors.append("empty sequencer" if isinstance(node, Sequencer) else "empty selector")
        for child in node.children:
            errors.extend(_structural_errors(child))
    return errors


def save_tree(path: str | Path, tree: BTNode) -> None:
    Path(path).write_text(json.dumps(node_to_dict(tree), indent=2) + "\n", encoding="utf-8")
