"""lanetutor: a desk-scale MOBA arena with a behavior-tree support tutor,
a rule-based tip engine, KDA analytics, and a live match server."""

__version__ = "0.1.0"
