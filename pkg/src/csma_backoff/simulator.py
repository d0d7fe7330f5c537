"""Slot-synchronous Monte-Carlo simulator for N saturated stations under
RTS/CTS with pluggable backoff policies.

Each virtual slot is idle (T_id), a success (T_s) or a collision (T_c).
Stations whose counter is zero transmit; by default every non-transmitting
station decrements its counter once per virtual slot, matching the analytic
chain's time scale (`freeze_on_busy` switches to the freeze-during-busy
alternative).

Three access-delay clocks are available per run:

* ``channel``  - contention gap since the end of the previous successful
  transmission on the channel, plus the packet's own T_s. Reproduces the
  millisecond-scale delay tables.
* ``station``  - the winner's own decrement count at T_id each, plus its own
  collisions at T_c, plus T_s (per-station virtual time).
* ``hol-wall`` - wall-clock time since the winner's previous success (true
  head-of-line delay; order N * L / tau at saturation).

RNG: numpy PCG64 (``np.random.default_rng``), one generator per run seed, so
identical seeds give bit-identical metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import MacConfig, PhyParameters, Strategy, compute_timing

RNG_ALGORITHM = "PCG64"

DELAY_CLOCKS = ("channel", "station", "hol-wall")
_CLOCK_ID = {name: i for i, name in enumerate(DELAY_CLOCKS)}


class EmptyMeasurementError(RuntimeError):
    """No slots left after warmup; metrics would be undefined."""


@dataclass(frozen=True)
class SimConfig:
    mac: MacConfig
    phy: PhyParameters
    num_virtual_slots: int
    seed: int
    warmup_slots: int = 10_000
    freeze_on_busy: bool = False
    delay_clock: str = "channel"

    def __post_init__(self):
        if self.warmup_slots < 0:
            raise ValueError("warmup_slots must be >= 0")
        if self.num_virtual_slots <= self.warmup_slots:
            raise EmptyMeasurementError(
                "num_virtual_slots must exceed warmup_slots")
        if self.delay_clock not in DELAY_CLOCKS:
            raise ValueError(f"delay_clock must be one of {DELAY_CLOCKS}")


@dataclass(frozen=True)
class SimMetrics:
    strategy: Strategy
    n: int
    m: int
    w: int
    seed: int
    measured_slots: int
    idle_slots: int
    success_slots: int
    collision_slots: int
    sim_time: float
    delivered_bits: float
    throughput_bps: float
    delay_samples: np.ndarray = field(repr=False)
    stage_tx_histogram: np.ndarray = field(repr=False)
    rng_algorithm: str = RNG_ALGORITHM


def backoff_on_success(strategy: Strategy, stage: int) -> int:
    """Next stage after a successful transmission."""
    if strategy is Strategy.PROPOSED:
        return max(stage - 1, 0)
    return 0


def backoff_on_collision(strategy: Strategy, stage: int, m: int) -> int:
    """Next stage after a collision: double the window up to the cap."""
    return min(stage + 1, m)


@njit(cache=True, nogil=True)
def _kernel(gen, n, m, w, total_slots, warmup, t_s, t_c, t_id,
            proposed, freeze_on_busy, clock_id, debug_checks):
    stage = np.zeros(n, np.int64)
    counter = np.empty(n, np.int64)
    for i in range(n):
        counter[i] = gen.integers(0, w)

    hol = np.zeros(n)                       # wall time packet became pending
    own_decrements = np.zeros(n, np.int64)  # per current packet
    own_collisions = np.zeros(n, np.int64)

    idle = np.int64(0)
    success = np.int64(0)
    collision = np.int64(0)
    hist = np.zeros(m + 1, np.int64)
    delays = np.empty(total_slots - warmup, np.float64)
    n_delays = 0

    wall = 0.0     # full clock including warmup
    gap = 0.0      # time since end of previous successful slot

    for slot in range(total_slots):
        if debug_checks:
            for i in range(n):
                if counter[i] < 0 or counter[i] >= (1 << stage[i]) * w:
                    raise AssertionError("counter outside window")

        k = 0
        winner = -1
        for i in range(n):
            if counter[i] == 0:
                k += 1
                winner = i
        measured = slot >= warmup

        if k == 0:
            if measured:
                idle += 1
            for i in range(n):
                counter[i] -= 1
                own_decrements[i] += 1
            wall += t_id
            gap += t_id
        elif k == 1:
            if measured:
                success += 1
                hist[stage[winner]] += 1
                if clock_id == 0:
                    delays[n_delays] = gap + t_s
                elif clock_id == 1:
                    delays[n_delays] = (own_decrements[winner] * t_id
                                        + own_collisions[winner] * t_c + t_s)
                else:
                    delays[n_delays] = wall + t_s - hol[winner]
                n_delays += 1
            wall += t_s
            gap = 0.0
            hol[winner] = wall
            own_decrements[winner] = 0
            own_collisions[winner] = 0
            if proposed:
                stage[winner] = max(stage[winner] - 1, 0)
            else:
                stage[winner] = 0
            counter[winner] = gen.integers(0, (1 << stage[winner]) * w)
            if not freeze_on_busy:
                for i in range(n):
                    if i != winner:
                        counter[i] -= 1
                        own_decrements[i] += 1
        else:
            if measured:
                collision += 1
            for i in range(n):
                if counter[i] == 0:
                    if measured:
                        hist[stage[i]] += 1
                    own_collisions[i] += 1
                    stage[i] = min(stage[i] + 1, m)
                    counter[i] = gen.integers(0, (1 << stage[i]) * w)
                elif not freeze_on_busy:
                    counter[i] -= 1
                    own_decrements[i] += 1
            wall += t_c
            gap += t_c

    return idle, success, collision, hist, delays[:n_delays]


def run(sim: SimConfig, debug_checks: bool = False) -> SimMetrics:
    """Execute one seeded simulation and collect post-warmup metrics."""
    mac, phy = sim.mac, sim.phy
    timing = compute_timing(phy)
    gen = np.random.default_rng(sim.seed)

    idle, success, collision, hist, delays = _kernel(
        gen, mac.num_stations, mac.max_stage, mac.min_window,
        sim.num_virtual_slots, sim.warmup_slots,
        timing.t_success, timing.t_collision, timing.t_idle,
        mac.strategy is Strategy.PROPOSED, sim.freeze_on_busy,
        _CLOCK_ID[sim.delay_clock], debug_checks)

    measured = int(idle + success + collision)
    if measured == 0:
        raise EmptyMeasurementError("zero measured slots")
    sim_time = (idle * timing.t_idle + success * timing.t_success
                + collision * timing.t_collision)
    delivered = success * phy.payload_bits
    return SimMetrics(
        strategy=mac.strategy, n=mac.num_stations, m=mac.max_stage,
        w=mac.min_window, seed=sim.seed, measured_slots=measured,
        idle_slots=int(idle), success_slots=int(success),
        collision_slots=int(collision), sim_time=float(sim_time),
        delivered_bits=float(delivered),
        throughput_bps=float(delivered / sim_time),
        delay_samples=delays, stage_tx_histogram=hist)


def replicate(sim: SimConfig, n_runs: int, seed_base: int,
              jobs: int = 1) -> list[SimMetrics]:
    """Independent runs with seeds seed_base .. seed_base + n_runs - 1.

    Results are returned in seed order regardless of scheduling; the jitted
    kernel releases the GIL, so replicates can run on a thread pool.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    from dataclasses import replace
    configs = [replace(sim, seed=seed_base + i) for i in range(n_runs)]

    def run_tagged(config):
        try:
            return run(config)
        except Exception as exc:
            raise type(exc)(f"seed {config.seed}: {exc}") from exc

    if jobs <= 1 or n_runs == 1:
        return [run_tagged(c) for c in configs]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_tagged, configs))


METRICS_CSV_HEADER = ("strategy,N,m,W,seed,slots,idle,success,collision,"
                      "sim_time_s,throughput_bps")


def metrics_csv_line(metrics: SimMetrics) -> str:
    from .analytic import fmt
    return ",".join([
        metrics.strategy.value, str(metrics.n), str(metrics.m),
        str(metrics.w), str(metrics.seed), str(metrics.measured_slots),
        str(metrics.idle_slots), str(metrics.success_slots),
        str(metrics.collision_slots), fmt(metrics.sim_time),
        fmt(metrics.throughput_bps),
    ])


def delay_csv_filename(metrics: SimMetrics) -> str:
    return (f"delays_{metrics.strategy.value}_N{metrics.n}"
            f"_m{metrics.m}_seed{metrics.seed}.csv")


def delay_csv_lines(metrics: SimMetrics) -> list[str]:
    from .analytic import fmt
    return ["delay_s"] + [fmt(d) for d in metrics.delay_samples]
