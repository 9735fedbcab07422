from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lanetutor.analytics import (
    AnalyticsError,
    MatchRecord,
    ScoreLine,
    SeriesReport,
    aggregate,
    experiment_report,
    export_csv,
    import_csv,
    kda_factor,
    render_report,
    scorelines_from_events,
)

counts = st.integers(min_value=0, max_value=50)


def record(match_id: str, kdas: dict[int, tuple[int, int, int]],
           condition: str = "baseline", phase: str | None = None) -> MatchRecord:
    lines = tuple(ScoreLine(p, k, d, a) for p, (k, d, a) in kdas.items())
    return MatchRecord(match_id=match_id, seed=0, config_hash="x", condition=condition,
                       duration_ticks=100, winner=None, scorelines=lines,
                       event_log=f"{match_id}.events.jsonl", log_sha256="y", phase=phase)


class TestKdaFactor:
    def test_deathless_line_scores_kills_plus_assists(self):
        assert kda_factor(2, 0, 3) == 5.0

    def test_plain_ratio(self):
        assert kda_factor(3, 2, 4) == 3.5

    def test_negative_input_rejected(self):
        with pytest.raises(AnalyticsError, match="deaths"):
            kda_factor(1, -1, 0)

    def test_non_integer_rejected(self):
        with pytest.raises(AnalyticsError):
            kda_factor(1.5, 1, 0)

    def test_matches_branch_free_reference_exhaustively(self):
        # independent oracle: dividing by max(d, 1) collapses the two branches
        for k, d, a in itertools.product(range(8), repeat=3):
            assert kda_factor(k, d, a) == (k + a) / max(d, 1)

    @given(counts, st.integers(min_value=1, max_value=50), counts)
    def test_monotonicity(self, k, d, a):
        base = kda_factor(k, d, a)
        assert kda_factor(k + 1, d, a) >= base
        assert kda_factor(k, d, a + 1) >= base
        assert kda_factor(k, d + 1, a) <= base

    @given(counts)
    def test_zero_kills_zero_assists_scores_zero(self, d):
        assert kda_factor(0, d, 0) == 0.0


class TestAggregate:
    def test_constant_series(self):
        records = [record(f"m{i}", {1: (4, 1, 0)}) for i in range(3)]
        report = aggregate(records, 1)
        assert (report.n, report.mean, report.stddev) == (3, 4.0, 0.0)

    def test_single_match_convention(self):
        report = aggregate([record("m", {1: (7, 1, 0)})], 1)
        assert (report.n, report.mean, report.stddev) == (1, 7.0, 0.0)

    def test_hand_checked_sample_stddev(self):
        # KDAs [2, 4, 6]: mean 4, sample stddev sqrt(((-2)^2 + 0 + 2^2)/2) = 2
        records = [record(f"m{i}", {1: (k, 1, 0)}) for i, k in enumerate([2, 4, 6])]
        report = aggregate(records, 1)
        assert report.mean == pytest.approx(4.0)
        assert report.stddev == pytest.approx(2.0)

    def test_empty_series_rejected(self):
        with pytest.raises(AnalyticsError):
            aggregate([], 1)

    def test_absent_player_names_the_match(self):
        with pytest.raises(AnalyticsError, match="m0"):
            aggregate([record("m0", {1: (1, 1, 1)})], 99)

    @given(st.lists(st.tuples(counts, counts, counts), min_size=2, max_size=6))
    def test_permutation_invariant(self, kdas):
        records = [record(f"m{i}", {1: kda}) for i, kda in enumerate(kdas)]
        base = aggregate(records, 1)
        for perm in itertools.islice(itertools.permutations(records), 6):
            other = aggregate(list(perm), 1)
            assert other.mean == pytest.approx(base.mean)
            assert other.stddev == pytest.approx(base.stddev)


class TestScorelinesFromEvents:
    def test_tallies_kills_deaths_assists(self):
        events = [
            {"tick": 5, "type": "kill", "killer": 1, "victim": 3, "assists": [2]},
            {"tick": 9, "type": "kill", "killer": 3, "victim": 1, "assists": []},
            {"tick": 11, "type": "damage", "src": 1, "dst": 3, "amount": 5.0},
        ]
        lines = scorelines_from_events(events, [1, 2, 3])
        assert lines == (ScoreLine(1, 1, 1, 0), ScoreLine(2, 0, 0, 1), ScoreLine(3, 1, 1, 0))


class TestExperimentReport:
    def test_three_phase_table(self):
        records = (
            [record(f"b{i}", {1: (i, 1, 0)}, "baseline", "before") for i in range(3)]
            + [record("t", {1: (6, 1, 0)}, "support_plus_tips", "with_tutor")]
            + [record(f"a{i}", {1: (i + 3, 1, 0)}, "baseline", "after") for i in range(3)]
        )
        report = experiment_report(records, 1)
        assert len(report.rows) == 3
        assert report.absent_phases == ()
        assert report.tutor_match_kdas == (6.0,)
        assert report.improved is True
        text = render_report(report)
        assert "with_tutor" in text and "improved: yes" in text

    def test_missing_phase_marked_absent(self):
        records = [record("b", {1: (2, 1, 0)}, "baseline", "before")]
        report = experiment_report(records, 1)
        assert "after" in report.absent_phases
        assert report.improved is None
        assert "absent" in render_report(report)

    def test_six_decimal_rendering(self):
        records = [record(f"m{i}", {1: (k, 1, 0)}, "baseline", "before")
                   for i, k in enumerate([2, 4, 6])]
        text = render_report(experiment_report(records, 1))
        assert "4.000000" in text and "2.000000" in text


class TestCsvRoundTrip:
    def test_exact_round_trip(self, tmp_path):
        reports = [
            SeriesReport(player=1, condition="baseline", n=3,
                         mean=10 / 3, stddev=1.2472191289246473, phase="before"),
            SeriesReport(player=1, condition="support_plus_tips", n=1,
                         mean=7.0, stddev=0.0, phase=None),
        ]
        path = tmp_path / "report.csv"
        export_csv(path, reports)
        assert import_csv(path) == [r.summary() for r in reports]

    @given(st.lists(st.tuples(counts, st.integers(1, 9), counts), min_size=1, max_size=5))
    def test_round_trip_arbitrary_series(self, tmp_path_factory, kdas):
        records = [record(f"m{i}", {1: kda}) for i, kda in enumerate(kdas)]
        report = aggregate(records, 1)
        path = tmp_path_factory.mktemp("csv") / "r.csv"
        export_csv(path, [report])
        assert import_csv(path) == [report.summary()]

    def test_header_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
        with pytest.raises(AnalyticsError):
            import_csv(path)
