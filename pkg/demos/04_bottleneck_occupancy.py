"""Stage-occupancy evidence for the stage-0 bottleneck.

Under the classical reset-on-success rule every delivered packet sends its
station back to stage 0, concentrating contention there. The half-window
rule spreads stations over the ladder: the fraction of transmission
attempts made from stage 0 drops, and with it the collision pressure.
"""

import numpy as np

from csma_backoff import (
    DEFAULT_PHY,
    MacConfig,
    SimConfig,
    Strategy,
    run,
    solve_fixed_point,
)

N, M = 50, 7

for strategy in Strategy:
    config = MacConfig(strategy=strategy, num_stations=N, max_stage=M)
    metrics = run(SimConfig(mac=config, phy=DEFAULT_PHY,
                            num_virtual_slots=1_010_000, seed=5))
    hist = metrics.stage_tx_histogram
    frac = hist / hist.sum()
    solution = solve_fixed_point(config, path="oracle")
    analytic = solution.stage_occupancy / solution.pi

    print(f"{strategy.value}: attempts per stage (simulated | analytic)")
    for stage in range(M + 1):
        bar = "#" * int(round(frac[stage] * 60))
        print(f"  stage {stage}: {frac[stage]:6.3f} | "
              f"{analytic[stage]:6.3f} {bar}")
    print(f"  stage-0 share: {frac[0]:.3f}")
    print()
