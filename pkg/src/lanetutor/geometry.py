"""2D vector math for the flat arena map."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Vec2:
    """A point or direction on the map. Components must be finite."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def length(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def dist_sq(self, other: "Vec2") -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return dx * dx + dy * dy

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def normalized(self) -> "Vec2":
        n = math.hypot(self.x, self.y)
        if n == 0.0:
            return Vec2(0.0, 0.0)
        return Vec2(self.x / n, self.y / n)

    def clamped(self, lo: float, hi: float) -> "Vec2":
        return Vec2(min(max(self.x, lo), hi), min(max(self.y, lo), hi))

    def step_toward(self, target: "Vec2", max_step: float) -> "Vec2":
        """Move up to max_step along the straight line to target."""
        dx = target.x - self.x
        dy = target.y - self.y
        d = math.hypot(dx, dy)
        if d <= max_step or d == 0.0:
            return target
        k = max_step / d
        return Vec2(self.x + dx * k, self.y + dy * k)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)
