import numpy as np
import pytest

from diversity_lab import (
    ExploitSpec,
    ScenarioConfig,
    max_control_run,
    run_scenario_study,
)


def study_fraction(config):
    grid = run_scenario_study(config)
    return {(point.n, point.t): point.success_fraction for point in grid}


class TestExploitSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            ExploitSpec(frozenset())
        with pytest.raises(ValueError):
            ExploitSpec(frozenset({0}), arrival=-1.0)


class TestScenarioConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ScenarioConfig(t_values=())
        with pytest.raises(ValueError):
            ScenarioConfig(t_values=(10.0,), delay=(30.0, 20.0))
        with pytest.raises(ValueError):
            ScenarioConfig(t_values=(10.0,), duration=0.0)
        with pytest.raises(ValueError):
            ScenarioConfig(t_values=(10.0,), samples=0)
        with pytest.raises(ValueError):
            ScenarioConfig(t_values=(10.0,), n_values=(0,))


class TestMaxControlRun:
    def test_single_platform_run_is_time_after_arrival(self):
        rng = np.random.default_rng(0)
        exploits = (ExploitSpec(frozenset({0}), arrival=450.0),)
        run = max_control_run(1, 900.0, (20.0, 30.0), exploits, rng)
        assert run == pytest.approx(450.0, abs=1e-12)

    def test_deterministic_dwell_single_vulnerable(self):
        # fixed 10 s dwells alternating between two platforms; only one is
        # exploited, so control runs are exactly one dwell long
        rng = np.random.default_rng(1)
        exploits = (ExploitSpec(frozenset({0}), arrival=0.0),)
        run = max_control_run(2, 900.0, (10.0, 10.0), exploits, rng)
        assert run == pytest.approx(10.0, abs=1e-9)

    def test_control_persists_across_migrations(self):
        rng = np.random.default_rng(2)
        exploits = (ExploitSpec(frozenset({0, 1}), arrival=0.0),)
        run = max_control_run(2, 900.0, (10.0, 10.0), exploits, rng)
        assert run == pytest.approx(900.0, abs=1e-9)

    def test_never_exploited(self):
        rng = np.random.default_rng(3)
        exploits = (ExploitSpec(frozenset({7}), arrival=0.0),)
        assert max_control_run(2, 900.0, (10.0, 10.0), exploits, rng) == 0.0

    def test_late_arrival_truncates_run(self):
        rng = np.random.default_rng(4)
        exploits = (ExploitSpec(frozenset({0}), arrival=899.0),)
        run = max_control_run(1, 900.0, (10.0, 10.0), exploits, rng)
        assert run == pytest.approx(1.0, abs=1e-12)


class TestScenarioStudy:
    def test_single_platform_matches_finite_window_line(self):
        config = ScenarioConfig(
            t_values=(300.0,),
            n_values=(1,),
            samples=4000,
            exploits=(ExploitSpec(frozenset({0})),),
            master_seed=5,
        )
        frac = study_fraction(config)[(1, 300.0)]
        assert abs(frac - (900.0 - 300.0) / 900.0) < 0.03

    def test_goal_beyond_duration_impossible(self):
        config = ScenarioConfig(
            t_values=(1000.0,),
            n_values=(2,),
            samples=300,
            exploits=(ExploitSpec(frozenset({0, 1}), arrival=0.0),),
        )
        assert study_fraction(config)[(2, 1000.0)] == 0.0

    def test_zero_goal_always_succeeds(self):
        config = ScenarioConfig(
            t_values=(0.0,),
            n_values=(2,),
            samples=100,
            exploits=(ExploitSpec(frozenset({0}),),),
        )
        assert study_fraction(config)[(2, 0.0)] == 1.0

    def test_tiny_goal_tracks_exploit_arrival(self):
        # with a trivially small goal, success is approximately "the exploit
        # arrives with at least T of the trial remaining"
        config = ScenarioConfig(
            t_values=(2.0,),
            n_values=(3,),
            samples=3000,
            exploits=(ExploitSpec(frozenset({0})),),
            master_seed=6,
        )
        frac = study_fraction(config)[(3, 2.0)]
        assert abs(frac - (900.0 - 2.0) / 900.0) < 0.05

    def test_asymptotics_two_platforms(self):
        # T just under two mean dwells: with one vulnerable platform of two,
        # alternation caps every control run at a single dwell (< 30 s), so
        # success is impossible; with both vulnerable, control spans the
        # whole trial and success is certain
        base = dict(t_values=(45.0,), n_values=(2,), samples=500, master_seed=7)
        one = ScenarioConfig(exploits=(ExploitSpec(frozenset({0}), arrival=0.0),), **base)
        both = ScenarioConfig(exploits=(ExploitSpec(frozenset({0, 1}), arrival=0.0),), **base)
        assert study_fraction(one)[(2, 45.0)] == 0.0
        assert study_fraction(both)[(2, 45.0)] == 1.0

    def test_downward_step_across_migration_period(self):
        # one vulnerable platform of three: a control run is a single dwell,
        # uniform on [20, 30], so success collapses between T=25 and T=30
        config = ScenarioConfig(
            t_values=(15.0, 20.0, 25.0, 30.0, 35.0),
            n_values=(3,),
            samples=500,
            exploits=(ExploitSpec(frozenset({0}), arrival=0.0),),
            master_seed=8,
        )
        frac = study_fraction(config)
        values = [frac[(3, t)] for t in (15.0, 20.0, 25.0, 30.0, 35.0)]
        assert all(a >= b for a, b in zip(values, values[1:]))
        step = values[2] - values[3]
        others = [values[0] - values[1], values[1] - values[2], values[3] - values[4]]
        assert step > 0.5
        assert step > max(others) + 0.3

    def test_reproducible(self):
        config = ScenarioConfig(t_values=(25.0,), n_values=(3,), samples=200, master_seed=9)
        assert run_scenario_study(config) == run_scenario_study(config)

    def test_labelings_override(self):
        config = ScenarioConfig(
            t_values=(10.0,),
            n_values=(2,),
            samples=4,
            exploits=(ExploitSpec(frozenset({0}), arrival=0.0),),
        )
        # nobody vulnerable -> no success; everybody vulnerable -> certain
        none = run_scenario_study(config, labelings=[({7},)] * 4)
        every = run_scenario_study(config, labelings=[({0, 1},)] * 4)
        assert none[0].success_fraction == 0.0
        assert every[0].success_fraction == 1.0

    def test_labelings_length_validated(self):
        config = ScenarioConfig(t_values=(10.0,), samples=3)
        with pytest.raises(ValueError, match="per sample"):
            run_scenario_study(config, labelings=[({0}, {1, 2})] * 2)
        with pytest.raises(ValueError, match="every configured exploit"):
            run_scenario_study(config, labelings=[({0},)] * 3)
