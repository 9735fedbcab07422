from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lanetutor.arena.config import GameConfig, default_map
from lanetutor.arena.sim import new_match, step
from lanetutor.arena.types import Cast, Lane, MoveTo, Slot, StatusEffect, StatusKind, Team
from lanetutor.geometry import Vec2
from lanetutor.tutor import (
    TutorConfig,
    TutorError,
    decide,
    follow_point,
    passive_speed,
    select_partner,
    setup_tutor,
)


def make_match(heroes_per_team: int = 2, tutor_config: TutorConfig | None = None):
    config = GameConfig(heroes_per_team=heroes_per_team, max_ticks=50_000)
    state = new_match(config, default_map())
    blue = state.heroes(Team.BLUE)
    ts = setup_tutor(state, blue[1].id, tutor_config)
    return state, ts, blue[0], blue[1]


class TestTutorConfig:
    def test_defaults_validate(self):
        TutorConfig().validate()

    def test_min_separation_must_be_below_follow_distance(self):
        with pytest.raises(TutorError):
            TutorConfig(follow_distance=10, min_separation=10).validate()

    @pytest.mark.parametrize("team,expected", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3)])
    def test_quorum_scales_with_team_size(self, team, expected):
        assert TutorConfig.for_team_size(team).ult_min_allies == expected


class TestSelectPartner:
    def test_bot_laner_preferred_over_mid(self):
        state, ts, novice, tutor_hero = make_match(heroes_per_team=2)
        assert novice.lane is Lane.BOT
        assert ts.partner == novice.id

    def test_fallback_nearest_to_bot_lane_end(self):
        config = GameConfig(heroes_per_team=3, max_ticks=600)
        state = new_match(config, default_map())
        a, b, c = state.heroes(Team.BLUE)
        for hero in (a, b, c):
            hero.lane = None
        bot_end = state.map.lanes[Lane.BOT][0]
        b.pos = bot_end + Vec2(1, 0)
        assert select_partner(state, Team.BLUE, exclude=c.id) == b.id

    def test_lowest_id_wins_ties_all_assignments(self):
        config = GameConfig(heroes_per_team=4, max_ticks=600)
        lanes = (Lane.BOT, Lane.MID, Lane.TOP)
        for assignment in product(lanes, repeat=3):
            state = new_match(config, default_map())
            allies = state.heroes(Team.BLUE)[:3]
            tutor_hero = state.heroes(Team.BLUE)[3]
            for hero, lane in zip(allies, assignment):
                hero.lane = lane
            chosen = select_partner(state, Team.BLUE, exclude=tutor_hero.id)
            bot = [h.id for h, lane in zip(allies, assignment) if lane is Lane.BOT]
            if bot:
                assert chosen == min(bot)
            else:
                end = state.map.lanes[Lane.BOT][0]
                assert chosen == min(allies, key=lambda h: (h.pos.dist_sq(end), h.id)).id

    def test_no_eligible_ally_raises(self):
        config = GameConfig(heroes_per_team=1, max_ticks=600)
        state = new_match(config, default_map())
        lone = state.heroes(Team.BLUE)[0]
        with pytest.raises(TutorError):
            select_partner(state, Team.BLUE, exclude=lone.id)


class TestFollowPoint:
    def test_colinear_geometry(self):
        state, ts, novice, tutor_hero = make_match()
        novice.pos = Vec2(100, 100)
        tutor_hero.pos = Vec2(100, 160)
        assert follow_point(state, ts) == Vec2(100, 140)

    def test_coincident_uses_spawn_side_direction(self):
        from lanetutor.arena.sim import hero_spawn
        state, ts, novice, tutor_hero = make_match()
        novice.pos = Vec2(100, 100)
        tutor_hero.pos = Vec2(100, 100)
        expected_dir = (hero_spawn(state, tutor_hero) - novice.pos).normalized()
        point = follow_point(state, ts)
        assert point.dist(novice.pos + expected_dir.scaled(ts.config.follow_distance)) < 1e-9

    @given(st.floats(0, 200), st.floats(0, 200), st.floats(0, 200), st.floats(0, 200))
    def test_never_within_min_separation_and_in_bounds(self, px, py, tx, ty):
        state, ts, novice, tutor_hero = make_match()
        novice.pos = Vec2(px, py)
        tutor_hero.pos = Vec2(tx, ty)
        point = follow_point(state, ts)
        assert point.dist(novice.pos) >= ts.config.min_separation - 1e-9
        assert 0 <= point.x <= state.map.size and 0 <= point.y <= state.map.size


class TestDecide:
    def test_heal_most_injured_partner(self):
        state, ts, novice, tutor_hero = make_match(
            tutor_config=TutorConfig(ult_min_allies=2))
        novice.hp = novice.max_hp * 0.3
        decision = decide(state, ts)
        assert decision.branch == 3
        assert decision.command == Cast(Slot.W, target=novice.id)

    def test_team_heal_on_quorum(self):
        state, ts, *_ = make_match(heroes_per_team=5)
        assert ts.config.ult_min_allies == 3
        blue = state.heroes(Team.BLUE)
        for hero in blue[:3]:
            hero.hp = hero.max_hp * 0.2
        decision = decide(state, ts)
        assert decision.branch == 1
        assert decision.command == Cast(Slot.R)

    def test_no_team_heal_below_quorum(self):
        state, ts, novice, _ = make_match(heroes_per_team=5)
        novice.hp = novice.max_hp * 0.2
        decision = decide(state, ts)
        assert decision.branch == 3  # falls to the single-target heal

    def test_crowd_control_on_threat_near_partner(self):
        state, ts, novice, tutor_hero = make_match()
        enemy = state.heroes(Team.RED)[0]
        novice.pos = Vec2(100, 100)
        tutor_hero.pos = Vec2(100, 130)
        enemy.pos = Vec2(100, 70)  # 30 from partner, 60 from tutor, E range 80
        decision = decide(state, ts)
        assert decision.branch == 2
        assert decision.command == Cast(Slot.E, pos=enemy.pos)

    def test_cc_prefers_silence_root_then_damage_slow(self):
        state, ts, novice, tutor_hero = make_match()
        enemy = state.heroes(Team.RED)[0]
        novice.pos, tutor_hero.pos, enemy.pos = Vec2(100, 100), Vec2(100, 130), Vec2(100, 70)
        tutor_hero.spell_cooldowns[Slot.E] = 50
        decision = decide(state, ts)
        assert decision.branch == 2
        assert decision.command == Cast(Slot.Q, pos=enemy.pos)

    def test_all_quiet_follows_partner(self):
        state, ts, *_ = make_match()
        decision = decide(state, ts)
        assert decision.branch == 5
        assert decision.command == MoveTo(follow_point(state, ts))

    def test_silenced_tutor_falls_through_to_movement(self):
        state, ts, novice, tutor_hero = make_match(
            tutor_config=TutorConfig(ult_min_allies=2))
        novice.hp = novice.max_hp * 0.3
        tutor_hero.statuses.append(StatusEffect(StatusKind.SILENCE, expires_at=10_000))
        decision = decide(state, ts)
        assert decision.branch == 5

    def test_retreat_when_critical(self):
        state, ts, novice, tutor_hero = make_match(
            tutor_config=TutorConfig(ult_min_allies=2))
        tutor_hero.hp = tutor_hero.max_hp * 0.2
        decision = decide(state, ts)
        assert decision.branch == 4
        assert isinstance(decision.command, MoveTo)

    def test_dead_tutor_raises(self):
        state, ts, _, tutor_hero = make_match()
        tutor_hero.alive = False
        with pytest.raises(TutorError):
            decide(state, ts)

    def test_heal_never_targets_full_hp(self):
        state, ts, novice, _ = make_match(tutor_config=TutorConfig(ult_min_allies=2))
        assert novice.hp == novice.max_hp
        decision = decide(state, ts)
        assert decision.branch == 5


class TestPassiveSpeed:
    def test_boost_toward_injured_ally(self):
        state, ts, novice, tutor_hero = make_match()
        novice.pos = tutor_hero.pos + Vec2(30, 0)
        novice.hp = novice.max_hp * 0.2
        speed = passive_speed(state, tutor_hero, Vec2(1, 0))
        assert speed == pytest.approx(tutor_hero.move_speed * 1.7)

    def test_no_boost_when_allies_healthy(self):
        state, ts, novice, tutor_hero = make_match()
        novice.pos = tutor_hero.pos + Vec2(30, 0)
        assert passive_speed(state, tutor_hero, Vec2(1, 0)) == tutor_hero.move_speed

    def test_no_boost_moving_away(self):
        state, ts, novice, tutor_hero = make_match()
        novice.pos = tutor_hero.pos + Vec2(30, 0)
        novice.hp = novice.max_hp * 0.2
        assert passive_speed(state, tutor_hero, Vec2(-1, 0)) == tutor_hero.move_speed


class TestInMatchBehavior:
    def test_tutor_keeps_following_through_a_match(self):
        from lanetutor.harness import build_session
        session = build_session(GameConfig(max_ticks=400), condition="support_only", seed=3)
        session.run_to_end()
        assert session.priority_violations == []
        branches = {d.branch for d in session.decision_trace}
        assert 5 in branches
        assert all(d.branch != 0 for d in session.decision_trace)

    def test_tutor_casts_heal_during_combat_match(self):
        from lanetutor.harness import build_session
        session = build_session(GameConfig(max_ticks=1500), condition="support_only", seed=3,
                                keep_events=True)
        session.run_to_end()
        from lanetutor.arena.types import SpellCast
        tutor_casts = [e for e in session.all_events
                       if isinstance(e, SpellCast) and e.caster == session.tutor_state.hero_id]
        assert tutor_casts, "expected the tutor to cast at least once in a combat match"
