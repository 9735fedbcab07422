"""Match performance metrics: the KDA factor, series aggregation, and
before/after experiment reports.

The KDA factor for a scoreline is (kills + assists) / deaths, with deathless
lines scored as kills + assists. Series use the sample (n-1) standard
deviation, reported as 0 for a single match. Human-readable output prints
floats with six decimal places; CSV stores full-precision reprs so a
re-import reproduces the exported values exactly.
"""
from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field
from pathlib import Path


class AnalyticsError(ValueError):
    pass


PHASES = ("before", "with_tutor", "after")
CSV_COLUMNS = ("player", "phase", "condition", "n", "mean", "stddev")


def kda_factor(kills: int, deaths: int, assists: int) -> float:
    for name, value in (("kills", kills), ("deaths", deaths), ("assists", assists)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise AnalyticsError(f"{name} must be a nonnegative integer, got {value!r}")
    if deaths > 0:
        return (kills + assists) / deaths
    return float(kills + assists)


@dataclass(frozen=True, slots=True)
class ScoreLine:
    player: int
    kills: int
    deaths: int
    assists: int

    @property
    def kda(self) -> float:
        return kda_factor(self.kills, self.deaths, self.assists)


def scorelines_from_events(events: list[dict], players: list[int]) -> tuple[ScoreLine, ...]:
    """Tally kill events: K as killer, D as victim, A as listed assist."""
    kills = {p: 0 for p in players}
    deaths = {p: 0 for p in players}
    assists = {p: 0 for p in players}
    for ev in events:
        if ev.get("type") != "kill":
            continue
        killer, victim = ev.get("killer"), ev.get("victim")
        if killer in kills:
            kills[killer] += 1
        if victim in deaths:
            deaths[victim] += 1
        for aid in ev.get("assists", ()):
            if aid in assists:
                assists[aid] += 1
    return tuple(ScoreLine(p, kills[p], deaths[p], assists[p]) for p in players)


@dataclass(frozen=True, slots=True)
class MatchRecord:
    match_id: str
    seed: int
    config_hash: str
    condition: str
    duration_ticks: int
    winner: str | None
    scorelines: tuple[ScoreLine, ...]
    event_log: str
    log_sha256: str
    phase: str | None = None

    def scoreline_for(self, player: int) -> ScoreLine:
        for line in self.scorelines:
            if line.player == player:
                return line
        raise AnalyticsError(f"player {player} absent from match {self.match_id}")


@dataclass(frozen=True, slots=True)
class SeriesReport:
    player: int
    condition: str
    n: int
    mean: float
    stddev: float
    kdas: tuple[float, ...] = ()
    phase: str | None = None

    def summary(self) -> "SeriesReport":
        """Projection onto the CSV columns (drops the per-match list)."""
        return SeriesReport(self.player, self.condition, self.n,
                            self.mean, self.stddev, (), self.phase)


def aggregate(series: list[MatchRecord], player: int,
              phase: str | None = None) -> SeriesReport:
    if not series:
        raise AnalyticsError("cannot aggregate an empty series")
    kdas = [record.scoreline_for(player).kda for record in series]
    mean = statistics.fmean(kdas)
    stddev = statistics.stdev(kdas) if len(kdas) > 1 else 0.0
    conditions = sorted({r.condition for r in series})
    return SeriesReport(player=player, condition="+".join(conditions), n=len(kdas),
                        mean=mean, stddev=stddev, kdas=tuple(kdas), phase=phase)


# ---------------------------------------------------------------------------
# Before/after experiment reports

@dataclass(frozen=True, slots=True)
class ExperimentReport:
    player: int
    rows: tuple[SeriesReport, ...]
    absent_phases: tuple[str, ...]
    tutor_match_kdas: tuple[float, ...]  # the highlighted with-tutor matches
    improved: bool | None  # after mean > before mean; None if either absent


def experiment_report(records: list[MatchRecord], player: int) -> ExperimentReport:
    """Group phase-labeled records into per-(phase, condition) series."""
    rows: list[SeriesReport] = []
    absent: list[str] = []
    phase_means: dict[str, float] = {}
    for phase in PHASES:
        phase_records = [r for r in records if r.phase == phase]
        if not phase_records:
            absent.append(phase)
            continue
        by_condition: dict[str, list[MatchRecord]] = {}
        for r in phase_records:
            by_condition.setdefault(r.condition, []).append(r)
        for condition in sorted(by_condition):
            rows.append(aggregate(by_condition[condition], player, phase=phase))
        phase_means[phase] = aggregate(phase_records, player).mean
    tutor_kdas = tuple(r.scoreline_for(player).kda for r in records if r.phase == "with_tutor")
    improved = None
    if "before" in phase_means and "after" in phase_means:
        improved = phase_means["after"] > phase_means["before"]
    return ExperimentReport(player=player, rows=tuple(rows), absent_phases=tuple(absent),
                            tutor_match_kdas=tutor_kdas, improved=improved)


def render_report(report: ExperimentReport) -> str:
    """Fixed-width table; floats shown with six decimal places."""
    lines = [f"player {report.player}"]
    lines.append(f"{'phase':<12}{'condition':<20}{'n':>3}  {'mean':>12}  {'stddev (n-1)':>12}")
    for row in report.rows:
        lines.append(f"{row.phase or '-':<12}{row.condition:<20}{row.n:>3}  "
                     f"{row.mean:>12.6f}  {row.stddev:>12.6f}")
    for phase in report.absent_phases:
        lines.append(f"{phase:<12}{'-':<20}{'0':>3}  {'absent':>12}  {'':>12}")
    if report.tutor_match_kdas:
        shown = ", ".join(f"{k:.6f}" for k in report.tutor_match_kdas)
        lines.append(f"with-tutor match KDA (highlight): {shown}")
    if report.improved is not None:
        lines.append(f"improved: {'yes' if report.improved else 'no'}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CSV export/import

def export_csv(path: str | Path, reports: list[SeriesReport]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            writer.writerow([r.player, r.phase or "", r.condition, r.n,
                             repr(r.mean), repr(r.stddev)])


def import_csv(path: str | Path) -> list[SeriesReport]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise AnalyticsError(f"unexpected CSV header {header!r}")
        out = []
        for row in reader:
            player, phase, condition, n, mean, stddev = row
            out.append(SeriesReport(player=int(player), phase=phase or None,
                                    condition=condition, n=int(n),
                                    mean=float(mean), stddev=float(stddev)))
    return out
