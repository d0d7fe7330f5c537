import numpy as np
import pytest

from csma_backoff.analytic import solve_fixed_point
from csma_backoff.core import DEFAULT_PHY, MacConfig, Strategy, compute_timing
from csma_backoff.simulator import (
    EmptyMeasurementError,
    SimConfig,
    backoff_on_collision,
    backoff_on_success,
    delay_csv_filename,
    metrics_csv_line,
    replicate,
    run,
)


def make_sim(strategy=Strategy.CLASSICAL, n=1, m=3, w=16, slots=100_000,
             seed=1, warmup=10_000, **kwargs):
    return SimConfig(
        mac=MacConfig(strategy=strategy, num_stations=n, max_stage=m,
                      min_window=w),
        phy=DEFAULT_PHY, num_virtual_slots=slots + warmup, seed=seed,
        warmup_slots=warmup, **kwargs)


class TestBackoffRules:
    def test_proposed_floor(self):
        assert backoff_on_success(Strategy.PROPOSED, 0) == 0

    def test_proposed_halves(self):
        assert backoff_on_success(Strategy.PROPOSED, 5) == 4

    def test_classical_reset(self):
        assert backoff_on_success(Strategy.CLASSICAL, 5) == 0

    @pytest.mark.parametrize("strategy", list(Strategy))
    def test_collision_doubles(self, strategy):
        assert backoff_on_collision(strategy, 0, 3) == 1
        assert backoff_on_collision(strategy, 3, 3) == 3
        assert backoff_on_collision(strategy, 6, 7) == 7


class TestSingleStation:
    def test_no_collisions(self):
        metrics = run(make_sim(n=1))
        assert metrics.collision_slots == 0

    def test_renewal_reward_throughput(self):
        # mean 7.5 idle slots per packet: L / (T_s + 7.5 T_id)
        metrics = run(make_sim(n=1, slots=200_000))
        timing = compute_timing(DEFAULT_PHY)
        expected = DEFAULT_PHY.payload_bits / (
            timing.t_success + 7.5 * timing.t_idle)
        assert metrics.throughput_bps == pytest.approx(expected, rel=0.01)


class TestDeterminismAndAccounting:
    def test_identical_seed_identical_metrics(self):
        a = run(make_sim(n=5, seed=42, slots=50_000))
        b = run(make_sim(n=5, seed=42, slots=50_000))
        assert metrics_csv_line(a) == metrics_csv_line(b)
        assert np.array_equal(a.delay_samples, b.delay_samples)
        assert np.array_equal(a.stage_tx_histogram, b.stage_tx_histogram)

    def test_accounting_identities(self):
        metrics = run(make_sim(n=10, seed=3, slots=50_000))
        timing = compute_timing(DEFAULT_PHY)
        assert (metrics.idle_slots + metrics.success_slots
                + metrics.collision_slots) == metrics.measured_slots
        assert metrics.sim_time == pytest.approx(
            metrics.idle_slots * timing.t_idle
            + metrics.success_slots * timing.t_success
            + metrics.collision_slots * timing.t_collision, rel=1e-15)
        assert metrics.delivered_bits == \
            metrics.success_slots * DEFAULT_PHY.payload_bits
        assert metrics.throughput_bps == pytest.approx(
            metrics.delivered_bits / metrics.sim_time, rel=1e-15)
        assert len(metrics.delay_samples) == metrics.success_slots

    def test_counter_legality_debug_mode(self):
        for strategy in Strategy:
            run(make_sim(strategy=strategy, n=5, slots=20_000),
                debug_checks=True)

    def test_empty_measurement(self):
        with pytest.raises(EmptyMeasurementError):
            make_sim(slots=0, warmup=100)


class TestReplicate:
    def test_single_run_equivalence(self):
        sim = make_sim(n=5, slots=20_000, seed=7)
        [only] = replicate(sim, 1, seed_base=7)
        assert metrics_csv_line(only) == metrics_csv_line(run(sim))

    def test_same_base_identical(self):
        sim = make_sim(n=5, slots=20_000)
        a = replicate(sim, 3, seed_base=11)
        b = replicate(sim, 3, seed_base=11)
        for x, y in zip(a, b):
            assert metrics_csv_line(x) == metrics_csv_line(y)

    def test_seed_order_with_jobs(self):
        sim = make_sim(n=5, slots=20_000)
        serial = replicate(sim, 4, seed_base=5, jobs=1)
        parallel = replicate(sim, 4, seed_base=5, jobs=4)
        for x, y in zip(serial, parallel):
            assert metrics_csv_line(x) == metrics_csv_line(y)

    def test_pooled_delay_count(self):
        sim = make_sim(n=8, slots=30_000)
        runs = replicate(sim, 4, seed_base=1)
        pooled = sum(len(r.delay_samples) for r in runs)
        assert pooled == sum(r.success_slots for r in runs)

    def test_bad_count(self):
        with pytest.raises(ValueError):
            replicate(make_sim(), 0, seed_base=1)


class TestOccupancyMatch:
    @pytest.mark.parametrize("strategy", list(Strategy))
    def test_histogram_tracks_stationary_occupancy(self, strategy):
        config = MacConfig(strategy=strategy, num_stations=10, max_stage=3)
        metrics = run(make_sim(strategy=strategy, n=10, m=3,
                               slots=1_000_000, seed=20))
        solution = solve_fixed_point(config, path="oracle")
        sim_frac = metrics.stage_tx_histogram / metrics.stage_tx_histogram.sum()
        ana_frac = solution.stage_occupancy / solution.pi
        assert np.max(np.abs(sim_frac - ana_frac)) < 0.03


class TestDelayClocks:
    def test_channel_clock_lower_bound(self):
        # every sample includes one full T_s
        metrics = run(make_sim(n=10, slots=50_000, delay_clock="channel"))
        timing = compute_timing(DEFAULT_PHY)
        assert np.all(metrics.delay_samples >= timing.t_success - 1e-12)

    def test_hol_wall_mean_matches_littles_law(self):
        # saturation: mean head-of-line delay ~ N * L / tau
        metrics = run(make_sim(n=5, slots=400_000, delay_clock="hol-wall"))
        expected = 5 * DEFAULT_PHY.payload_bits / metrics.throughput_bps
        assert metrics.delay_samples.mean() == pytest.approx(expected,
                                                             rel=0.05)

    def test_station_clock_single_station_matches_wall(self):
        # with N = 1 every slot is the winner's own, so both clocks agree
        a = run(make_sim(n=1, slots=20_000, delay_clock="station"))
        b = run(make_sim(n=1, slots=20_000, delay_clock="hol-wall"))
        assert np.allclose(a.delay_samples, b.delay_samples)

    def test_unknown_clock(self):
        with pytest.raises(ValueError):
            make_sim(delay_clock="bogus")


class TestFreezeOnBusy:
    def test_flag_changes_dynamics(self):
        a = run(make_sim(n=10, slots=50_000, seed=9))
        b = run(make_sim(n=10, slots=50_000, seed=9, freeze_on_busy=True))
        assert a.success_slots != b.success_slots

    def test_filename_convention(self):
        metrics = run(make_sim(strategy=Strategy.PROPOSED, n=3, m=3, seed=4,
                               slots=20_000))
        assert delay_csv_filename(metrics) == "delays_proposed_N3_m3_seed4.csv"
