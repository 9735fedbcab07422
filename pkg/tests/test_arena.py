from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lanetutor.arena import config as cfg_mod
from lanetutor.arena import sim
from lanetutor.arena.config import ConfigError, GameConfig, config_hash, default_map
from lanetutor.arena.eventlog import EventLogError, event_line, read_event_dicts
from lanetutor.arena.sim import (
    GameState,
    award_xp,
    deal_damage,
    heal,
    new_match,
    resolve_kill_credit,
    state_checksum,
    step,
)
from lanetutor.arena.types import (
    Attack,
    AttackSpec,
    Cast,
    CommandRejected,
    Damage,
    Kill,
    Lane,
    MatchEnd,
    MoveTo,
    Slot,
    SpellCast,
    StatusEffect,
    StatusKind,
    Team,
    Unit,
    UnitKind,
)
from lanetutor.geometry import Vec2


def add_minion(state: GameState, team: Team, pos: Vec2, *, hp: float = 60.0,
               move_speed: float = 0.0, lane: Lane = Lane.MID) -> Unit:
    stats = state.config.stats
    return sim._add_unit(state, Unit(
        id=0, kind=UnitKind.MINION, team=team, pos=pos, hp=hp, max_hp=hp,
        move_speed=move_speed,
        attack=AttackSpec(stats.minion_range, stats.minion_damage, stats.minion_attack_cooldown),
        lane=lane,
    ))


class TestNewMatch:
    def test_default_config_two_heroes_per_team(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        assert state.tick == 0
        kinds = [u.kind for u in state.units.values()]
        assert kinds.count(UnitKind.HERO) == 4
        assert kinds.count(UnitKind.TOWER) >= 6
        assert kinds.count(UnitKind.NEXUS) == 2

    def test_five_heroes_per_team_gives_ten_heroes(self, arena_map):
        state = new_match(GameConfig(heroes_per_team=5), arena_map)
        assert len(state.heroes()) == 10

    def test_zero_wave_interval_rejected(self, arena_map):
        with pytest.raises(ConfigError, match="wave_interval must be positive"):
            new_match(GameConfig(wave_interval=0), arena_map)

    def test_zero_heroes_rejected(self, arena_map):
        with pytest.raises(ConfigError, match="heroes_per_team"):
            new_match(GameConfig(heroes_per_team=0), arena_map)

    def test_structures_at_full_hp(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        for u in state.units.values():
            assert u.hp == u.max_hp

    def test_rng_seeded_from_config(self, arena_map):
        a = new_match(GameConfig(rng_seed=42), arena_map)
        b = new_match(GameConfig(rng_seed=42), arena_map)
        assert a.rng.random() == b.rng.random()


class TestConfigSerialization:
    def test_round_trip(self, small_config):
        doc = cfg_mod.config_to_dict(small_config)
        assert cfg_mod.config_from_dict(doc) == small_config

    def test_unknown_field_rejected(self):
        doc = cfg_mod.config_to_dict(GameConfig())
        doc["minion_army_size"] = 99
        with pytest.raises(ConfigError, match="minion_army_size"):
            cfg_mod.config_from_dict(doc)

    def test_map_round_trip(self, arena_map):
        assert cfg_mod.map_from_dict(cfg_mod.map_to_dict(arena_map)) == arena_map

    def test_hash_is_stable_and_sensitive(self, arena_map):
        base = config_hash(GameConfig(), arena_map)
        assert base == config_hash(GameConfig(), arena_map)
        assert base != config_hash(GameConfig(wave_interval=999), arena_map)

    def test_shipped_defaults_match_code(self):
        path = cfg_mod.default_config_path()
        config, map_spec = cfg_mod.load_config_file(path)
        assert config == GameConfig()
        assert map_spec == default_map()

    def test_default_ruleset_pinned_by_hash(self):
        # combat constants are a documented contract; changing any default
        # must be a deliberate, test-visible act
        assert config_hash(GameConfig(), default_map()) == \
            "e705319758ff5b7d76c257ff561a7389c26ac17cf23477a9537f5ad5485e4039"


class TestStep:
    def test_last_hit_awards_gold(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes(Team.BLUE)[0]
        minion = add_minion(state, Team.RED, hero.pos + Vec2(5, 0), hp=5.0)
        gold_before = hero.gold
        events = step(state, {hero.id: Attack(minion.id)})
        assert minion.id not in state.units
        assert hero.gold == gold_before + small_config.rewards.minion_gold
        assert not any(isinstance(e, Kill) for e in events)

    def test_quiescent_tick_changes_only_timers(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes()[0]
        hero.attack.remaining = 5
        before = {u.id: (u.pos, u.hp, u.mana, u.gold) for u in state.units.values()}
        step(state, {})
        assert state.tick == 1
        assert hero.attack.remaining == 4
        after = {u.id: (u.pos, u.hp, u.mana, u.gold) for u in state.units.values()}
        assert before == after

    def test_scripted_run_matches_independent_rerun(self, small_config, arena_map):
        def run_once() -> tuple[str, list[str]]:
            state = new_match(small_config, arena_map)
            heroes = [u.id for u in state.heroes()]
            lines: list[str] = []
            for t in range(500):
                commands = {}
                for i, hid in enumerate(heroes):
                    hero = state.units[hid]
                    if not hero.alive:
                        continue
                    goal = arena_map.lanes[Lane.MID][(t // 40 + i) % 2]
                    commands[hid] = MoveTo(goal)
                lines.extend(event_line(e) for e in step(state, commands))
            return state_checksum(state), lines

        first, second = run_once(), run_once()
        assert first[0] == second[0]
        assert first[1] == second[1]

    def test_dead_hero_command_rejected_with_event(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes(Team.BLUE)[0]
        hero.alive = False
        events = step(state, {hero.id: MoveTo(Vec2(50, 50))})
        rejected = [e for e in events if isinstance(e, CommandRejected)]
        assert rejected and rejected[0].hero == hero.id and rejected[0].reason == "dead"

    def test_step_after_match_end_raises(self, arena_map):
        state = new_match(GameConfig(max_ticks=1), arena_map)
        events = step(state, {})
        assert any(isinstance(e, MatchEnd) for e in events)
        with pytest.raises(RuntimeError):
            step(state, {})

    def test_wave_spawn_counts(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        for _ in range(small_config.wave_interval + 1):
            step(state, {})
        minions = [u for u in state.units.values() if u.kind is UnitKind.MINION]
        assert len(minions) == 2 * 3 * small_config.wave_size

    def test_nexus_destruction_ends_match(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        nexus = next(u for u in state.units.values()
                     if u.kind is UnitKind.NEXUS and u.team is Team.RED)
        hero = state.heroes(Team.BLUE)[0]
        hero.pos = nexus.pos + Vec2(5, 0)
        hero.attack = AttackSpec(range=10.0, damage=nexus.hp + 1, cooldown=5)
        events = step(state, {hero.id: Attack(nexus.id)})
        ends = [e for e in events if isinstance(e, MatchEnd)]
        assert ends and ends[0].winner is Team.BLUE
        assert state.finished


class TestStatuses:
    def test_rooted_unit_has_zero_displacement(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes()[0]
        hero.statuses.append(StatusEffect(StatusKind.ROOT, expires_at=100))
        pos = hero.pos
        step(state, {hero.id: MoveTo(Vec2(100, 100))})
        assert state.units[hero.id].pos == pos

    def test_silenced_cast_dropped_with_event(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes()[0]
        sim.equip_kit(hero, small_config.kit)
        hero.statuses.append(StatusEffect(StatusKind.SILENCE, expires_at=100))
        events = step(state, {hero.id: Cast(Slot.R)})
        assert not any(isinstance(e, SpellCast) for e in events)
        rejected = [e for e in events if isinstance(e, CommandRejected)]
        assert rejected and rejected[0].reason == "silenced"

    def test_slow_reduces_step_length(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        a, b = state.heroes(Team.BLUE)[0], state.heroes(Team.RED)[0]
        a.pos, b.pos = Vec2(50, 50), Vec2(150, 150)
        b.statuses.append(StatusEffect(StatusKind.SLOW, expires_at=100, pct=50.0))
        step(state, {a.id: MoveTo(Vec2(120, 50)), b.id: MoveTo(Vec2(150, 80))})
        moved_a = state.units[a.id].pos.dist(Vec2(50, 50))
        moved_b = state.units[b.id].pos.dist(Vec2(150, 150))
        assert moved_a == pytest.approx(small_config.stats.hero_speed)
        assert moved_b == pytest.approx(small_config.stats.hero_speed * 0.5)

    def test_expired_statuses_removed_before_movement(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes()[0]
        hero.statuses.append(StatusEffect(StatusKind.ROOT, expires_at=0))
        pos = hero.pos
        step(state, {hero.id: MoveTo(Vec2(100, 100))})
        assert state.units[hero.id].pos != pos
        assert not hero.statuses


class TestSpells:
    def test_global_team_heal_hits_exactly_living_allied_heroes(self, arena_map):
        config = GameConfig(heroes_per_team=3, max_ticks=600)
        state = new_match(config, arena_map)
        caster, ally, dead_ally = state.heroes(Team.BLUE)
        enemy = state.heroes(Team.RED)[0]
        sim.equip_kit(caster, config.kit)
        for i, u in enumerate((caster, ally, dead_ally, enemy)):
            u.hp = u.max_hp * 0.5
            u.pos = Vec2(80 + 10 * i, 100)  # off the fountain
        dead_ally.alive = False
        healed = config.kit[Slot.R].magnitude
        events = step(state, {caster.id: Cast(Slot.R)})
        assert any(isinstance(e, SpellCast) and e.slot is Slot.R for e in events)
        regen = config.stats.hero_hp_regen
        assert caster.hp == pytest.approx(caster.max_hp * 0.5 + regen + healed)
        assert ally.hp == pytest.approx(ally.max_hp * 0.5 + regen + healed)
        assert dead_ally.hp == pytest.approx(dead_ally.max_hp * 0.5)
        assert enemy.hp == pytest.approx(enemy.max_hp * 0.5 + regen)

    def test_single_target_heal_clamps_at_max(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        caster, ally = state.heroes(Team.BLUE)
        sim.equip_kit(caster, small_config.kit)
        ally.hp = ally.max_hp - 1.0
        step(state, {caster.id: Cast(Slot.W, target=ally.id)})
        assert ally.hp == ally.max_hp

    def test_aoe_silence_root_applies_both_statuses(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        caster = state.heroes(Team.BLUE)[0]
        enemy = state.heroes(Team.RED)[0]
        sim.equip_kit(caster, small_config.kit)
        enemy.pos = caster.pos + Vec2(30, 0)
        step(state, {caster.id: Cast(Slot.E, pos=enemy.pos)})
        t = state.tick
        assert enemy.has_status(StatusKind.SILENCE, t)
        assert enemy.has_status(StatusKind.ROOT, t)

    def test_cast_on_cooldown_rejected(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        caster = state.heroes(Team.BLUE)[0]
        sim.equip_kit(caster, small_config.kit)
        caster.spell_cooldowns[Slot.R] = 10
        events = step(state, {caster.id: Cast(Slot.R)})
        rejected = [e for e in events if isinstance(e, CommandRejected)]
        assert rejected and rejected[0].reason == "on_cooldown"


class TestKillCredit:
    def _arena(self, arena_map):
        state = new_match(GameConfig(heroes_per_team=3, max_ticks=600), arena_map)
        blue = [u.id for u in state.heroes(Team.BLUE)]
        victim = state.heroes(Team.RED)[0].id
        return state, blue, victim

    def test_killer_and_recent_damager(self, arena_map):
        state, (a, b, _), victim = self._arena(arena_map)
        state.tick = 300
        state.recent_damage[victim] = [(b, 250), (a, 300)]
        killer, assists = resolve_kill_credit(state, victim)
        assert killer == a
        assert assists == (b,)

    def test_solo_kill_has_no_assists(self, arena_map):
        state, (a, _, _), victim = self._arena(arena_map)
        state.tick = 300
        state.recent_damage[victim] = [(a, 300)]
        assert resolve_kill_credit(state, victim) == (a, ())

    def test_damage_outside_window_not_credited(self, arena_map):
        state, (a, b, _), victim = self._arena(arena_map)
        window = state.config.assist_window
        state.tick = window + 301
        state.recent_damage[victim] = [(b, 300), (a, state.tick)]
        # brute-force oracle over the raw damage log
        expected = sorted({src for src, tk in state.recent_damage[victim]
                           if state.tick - tk <= window and src != a})
        assert expected == []
        killer, assists = resolve_kill_credit(state, victim)
        assert killer == a and assists == ()

    def test_neutral_killer_hero_assists_still_credited(self, arena_map):
        state, (a, _, _), victim = self._arena(arena_map)
        tower = next(u.id for u in state.units.values() if u.kind is UnitKind.TOWER)
        state.tick = 100
        state.recent_damage[victim] = [(a, 50), (tower, 100)]
        killer, assists = resolve_kill_credit(state, victim)
        assert killer == tower
        assert assists == (a,)

    def test_random_logs_match_brute_force_oracle(self, arena_map):
        import random
        state, blue, victim = self._arena(arena_map)
        window = state.config.assist_window
        tower = next(u.id for u in state.units.values() if u.kind is UnitKind.TOWER)
        red_allies = [u.id for u in state.heroes(Team.RED)]
        rng = random.Random(9)
        sources = blue + [tower] + red_allies  # heroes, a neutral, even "allies"
        for trial in range(200):
            now = rng.randint(window + 1, 5000)
            state.tick = now
            n = rng.randint(1, 8)
            log = sorted(((rng.choice(sources), rng.randint(now - 2 * window, now))
                          for _ in range(n)), key=lambda e: e[1])
            log.append((rng.choice(sources), now))  # the killing blow
            state.recent_damage[victim] = log
            killer, assists = resolve_kill_credit(state, victim)
            expected_killer = log[-1][0]
            expected_assists = sorted({
                src for src, tk in log
                if now - tk <= window and src != expected_killer
                and src in blue  # enemy heroes of the red victim
            })
            assert killer == expected_killer
            assert list(assists) == expected_assists


class TestTowerAggro:
    def _setup(self, arena_map):
        state = new_match(GameConfig(max_ticks=5000), arena_map)
        tower = next(u for u in state.units.values()
                     if u.kind is UnitKind.TOWER and u.team is Team.BLUE and u.lane is Lane.MID)
        blue_hero, _ = state.heroes(Team.BLUE)
        red_hero, _ = state.heroes(Team.RED)
        blue_hero.pos = tower.pos + Vec2(8, 0)
        red_hero.pos = tower.pos + Vec2(0, 12)
        minion = add_minion(state, Team.RED, tower.pos + Vec2(-20, 0), hp=10_000.0)
        return state, tower, blue_hero, red_hero, minion

    def test_prefers_minion_over_hero(self, arena_map):
        state, tower, _, red_hero, minion = self._setup(arena_map)
        step(state, {})
        assert tower.attack_target == minion.id

    def test_switches_to_hero_that_attacks_ally_in_range(self, arena_map):
        state, tower, blue_hero, red_hero, minion = self._setup(arena_map)
        step(state, {red_hero.id: Attack(blue_hero.id)})
        assert tower.attack_target == red_hero.id

    def test_aggro_expires_back_to_minion(self, arena_map):
        state, tower, blue_hero, red_hero, minion = self._setup(arena_map)
        step(state, {red_hero.id: Attack(blue_hero.id)})
        for _ in range(state.config.tower_aggro_window + 1):
            step(state, {})
        assert tower.attack_target == minion.id


class TestProgression:
    def test_level_up_raises_stats_and_rank(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes()[0]
        sim.equip_kit(hero, small_config.kit)
        base_hp, base_damage = hero.max_hp, hero.attack.damage
        award_xp(state, hero, small_config.xp_levels[0])
        assert hero.level == 2
        assert hero.max_hp == base_hp + small_config.stats.level_hp_bonus
        assert hero.attack.damage == base_damage + small_config.stats.level_damage_bonus
        assert hero.spell_ranks[Slot.W] == 2

    def test_level_is_nondecreasing_in_xp(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes()[0]
        last = hero.level
        for _ in range(60):
            award_xp(state, hero, 50)
            assert hero.level >= last
            last = hero.level

    def test_hero_respawns_at_spawn_with_full_hp(self, small_config, arena_map):
        state = new_match(small_config, arena_map)
        hero = state.heroes(Team.BLUE)[0]
        enemy = state.heroes(Team.RED)[0]
        deal_damage(state, enemy, hero, hero.hp + 1)
        state._dying = [hero.id]
        sim._phase_deaths(state, state.tick)
        assert not hero.alive
        assert hero.respawn_at == state.tick + small_config.respawn_base
        spawn = sim.hero_spawn(state, hero)
        for _ in range(small_config.respawn_base + 1):
            step(state, {})
        assert hero.alive and hero.hp == hero.max_hp and hero.pos == spawn


class TestHpInvariant:
    @given(st.lists(st.tuples(st.booleans(),
                              st.floats(min_value=0, max_value=500, allow_nan=False)),
                    max_size=40))
    def test_hp_stays_in_bounds(self, ops):
        state = new_match(GameConfig(), default_map())
        enemy = state.heroes(Team.RED)[0]
        unit = state.heroes(Team.BLUE)[0]
        for is_heal, amount in ops:
            if is_heal:
                heal(unit, amount)
            else:
                deal_damage(state, enemy, unit, amount)
            assert 0.0 <= unit.hp <= unit.max_hp
            if not unit.alive:
                break


class TestEventLog:
    def test_lines_are_deterministic_json(self):
        event = Damage(3, 1, 2, 17.5)
        assert event_line(event) == event_line(event)
        assert json.loads(event_line(event))["type"] == "damage"

    def test_read_rejects_corrupt_line_with_number(self, tmp_path):
        path = tmp_path / "log.jsonl"
        path.write_text('{"tick":0,"type":"damage"}\nnot json\n', encoding="utf-8")
        with pytest.raises(EventLogError, match="line 2"):
            read_event_dicts(path)

    def test_read_rejects_missing_fields(self, tmp_path):
        path = tmp_path / "log.jsonl"
        path.write_text('{"foo": 1}\n', encoding="utf-8")
        with pytest.raises(EventLogError, match="line 1"):
            read_event_dicts(path)
