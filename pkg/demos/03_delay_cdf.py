"""Access-delay quantiles at 50 saturated stations.

Pools replicated runs per strategy and prints the delay table with the
relative gain of the half-window strategy. Uses the channel-access delay
clock (contention gap since the previous successful transmission plus one
full transmission time).
"""

import numpy as np

from csma_backoff import (
    DEFAULT_PHY,
    Ecdf,
    MacConfig,
    SimConfig,
    Strategy,
    gain_percent,
    replicate,
)

N_RUNS = 4
SLOTS = 500_000

for m in (3, 7):
    ecdfs = {}
    for strategy in Strategy:
        sim = SimConfig(
            mac=MacConfig(strategy=strategy, num_stations=50, max_stage=m),
            phy=DEFAULT_PHY, num_virtual_slots=SLOTS + 10_000, seed=1)
        runs = replicate(sim, N_RUNS, seed_base=1, jobs=4)
        ecdfs[strategy] = Ecdf(np.concatenate(
            [r.delay_samples for r in runs]))

    print(f"m = {m}")
    print(f"  {'CDF':>4} {'half-window/ms':>15} {'classical/ms':>13} "
          f"{'gain/%':>7}")
    for q in (0.99, 0.98, 0.95, 0.90):
        d_p = ecdfs[Strategy.PROPOSED].quantile(q) * 1e3
        d_c = ecdfs[Strategy.CLASSICAL].quantile(q) * 1e3
        print(f"  {q:>4.0%} {d_p:>15.1f} {d_c:>13.1f} "
              f"{gain_percent(d_p, d_c):>7.2f}")
