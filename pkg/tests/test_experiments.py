"""Bundled scenarios, the lesson-size sweep, and derived measures."""
import pytest

from forgetsim import (
    BusyPolicy,
    ConfigError,
    DecayMode,
    FixedTimes,
    UniformRandom,
    metrics_at,
    run,
)
from forgetsim.experiments import (
    PRESET_NAMES,
    SweepRow,
    find_optimal_n,
    information_rate,
    preset,
    preset_pr1,
    preset_pr2,
    preset_pr3,
    sweep_n,
)


class TestPresets:
    def test_pr1_shape(self):
        cfg = preset_pr1()
        assert cfg.n == 1
        assert cfg.dt == 0.001
        assert (cfg.t_start, cfg.t_end) == (-3.0, 25.0)
        assert cfg.forgetting.gamma0 == 0.002
        assert cfg.forgetting.beta == 1.0
        assert cfg.forgetting.mode is DecayMode.PER_STEP
        assert (cfg.effort.tau_inf, cfg.effort.a, cfg.effort.b) == (1.0, 1.5, 5.0)
        assert isinstance(cfg.policy, FixedTimes)
        assert [t for t, _ in cfg.policy.pairs] == [3.0, 6.0, 9.0, 12.0, 15.0, 18.0]
        assert cfg.busy is BusyPolicy.SKIP_TIME

    def test_pr2_shape(self):
        cfg = preset_pr2()
        assert cfg.n == 13
        assert cfg.dt == 0.005
        assert cfg.schedule.windows == ((50.0, 350.0),)
        assert cfg.forgetting.beta == 3.0
        assert isinstance(cfg.policy, UniformRandom)
        assert cfg.busy is BusyPolicy.FREEZE_ACTIVE

    def test_pr3_shape(self):
        cfg = preset_pr3()
        assert cfg.n == 30
        assert len(cfg.schedule.windows) == 3
        assert cfg.schedule.total_duration() == 540.0
        assert cfg.busy is BusyPolicy.DECAY_ALL
        assert cfg.sample_every == 2

    def test_lookup_by_name(self):
        for name in PRESET_NAMES:
            assert preset(name).n >= 1
        assert preset("pr2", n=10).n == 10
        with pytest.raises(ConfigError):
            preset("pr9")
        with pytest.raises(ConfigError):
            preset("pr1", n=5)
        with pytest.raises(ConfigError):
            preset("pr3", n=5)
        with pytest.raises(ConfigError):
            preset_pr2(0)
        with pytest.raises(ConfigError):
            preset_pr2(2.5)

    def test_pr1_fires_six_times(self):
        result = run(preset_pr1())
        assert len(result.accesses) == 6
        assert result.s[0] == 6
        for access, nominal in zip(result.accesses, (3.0, 6.0, 9.0, 12.0, 15.0, 18.0)):
            # fires at the first grid step at or after the scheduled time
            assert nominal <= access.t < nominal + 2 * 0.001

    def test_pr2_single_element_degenerate(self):
        result = run(preset_pr2(1))
        # one element hammered for the whole lesson: fully learned
        assert result.z_total_final() > 0.99
        assert result.s[0] > 100

    def test_presets_are_deterministic(self):
        a = run(preset_pr2(5)).trajectory
        b = run(preset_pr2(5)).trajectory
        assert a.z_total[-1] == b.z_total[-1]


class TestSweep:
    def test_rows_sorted_and_complete(self):
        rows = sweep_n([12, 10, 11], measure_at=400.0)
        assert [r.n for r in rows] == [10, 11, 12]
        for row in rows:
            assert row.k == row.z_final / row.n  # defining identity, bit-exact
            assert 0.0 <= row.k <= 1.0
            assert row.mean_gamma_final > 0.0

    def test_deterministic_across_calls(self):
        a = sweep_n([8, 9])
        b = sweep_n([9, 8])
        assert a == b

    def test_measure_at_changes_measurement(self):
        early = sweep_n([10], measure_at=350.0)[0]
        late = sweep_n([10], measure_at=700.0)[0]
        assert early.z_final != late.z_final

    def test_measure_at_validated(self):
        with pytest.raises(ConfigError):
            sweep_n([5], measure_at=900.0)
        with pytest.raises(ConfigError):
            sweep_n([], measure_at=700.0)

    def test_matches_direct_run(self):
        from dataclasses import replace

        from forgetsim import RoundRobin

        row = sweep_n([7], measure_at=700.0)[0]
        cfg = replace(preset_pr2(7), policy=RoundRobin(start=1))
        m = metrics_at(run(cfg).trajectory, 700.0)
        assert row.z_final == m.z_total
        assert row.mean_gamma_final == m.mean_gamma


class TestOptimalN:
    def test_picks_largest_z(self):
        rows = [
            SweepRow(n=3, z_final=1.0, mean_gamma_final=1e-9, k=0.33),
            SweepRow(n=4, z_final=2.5, mean_gamma_final=1e-8, k=0.62),
            SweepRow(n=5, z_final=2.0, mean_gamma_final=1e-7, k=0.4),
        ]
        assert find_optimal_n(rows) == 4

    def test_tie_goes_to_smaller_n(self):
        rows = [
            SweepRow(n=6, z_final=2.0, mean_gamma_final=0.0, k=0.33),
            SweepRow(n=4, z_final=2.0, mean_gamma_final=0.0, k=0.5),
        ]
        assert find_optimal_n(rows) == 4

    def test_validation(self):
        with pytest.raises(ConfigError):
            find_optimal_n([])
        row = SweepRow(n=4, z_final=1.0, mean_gamma_final=0.0, k=0.25)
        with pytest.raises(ConfigError):
            find_optimal_n([row, row])


class TestInformationRate:
    def test_elements_per_lesson_uev(self):
        assert information_rate(preset_pr2()) == 13 / 300.0
        assert information_rate(preset_pr3()) == 30 / 540.0

    def test_requires_lesson_time(self):
        from conftest import decay_only_config

        with pytest.raises(ConfigError):
            information_rate(decay_only_config(0.01))
