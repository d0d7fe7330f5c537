"""Empirical CDFs, quantiles, gains and relative errors for the
delay and validation pipelines.
"""

from __future__ import annotations

import math

import numpy as np


class Ecdf:
    """Empirical distribution over a non-empty sample of delays (seconds)."""

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=np.float64), kind="stable")
        if arr.size == 0:
            raise ValueError("Ecdf requires at least one sample")
        self.sorted_samples = arr

    @property
    def n(self) -> int:
        return int(self.sorted_samples.size)

    def quantile(self, q: float) -> float:
        """Lower empirical quantile: sorted_samples[ceil(q * n) - 1].

        No interpolation; q must lie in (0, 1].
        """
        if not 0.0 < q <= 1.0:
            raise ValueError(f"q={q} outside (0, 1]")
        idx = math.ceil(q * self.n) - 1
        return float(self.sorted_samples[idx])

    def merge(self, other: "Ecdf") -> "Ecdf":
        return Ecdf(np.concatenate([self.sorted_samples,
                                    other.sorted_samples]))


def quantile(ecdf: Ecdf, q: float) -> float:
    return ecdf.quantile(q)


def gain_percent(proposed: float, classical: float) -> float:
    """Relative delay reduction of the half-window strategy, in percent."""
    if classical <= 0.0:
        raise ValueError("classical delay must be positive")
    return 100.0 * (classical - proposed) / classical


def relative_error(simulated: float, analytic: float) -> float:
    """|simulated - analytic| / |analytic|."""
    if analytic == 0.0:
        raise ValueError("analytic reference must be nonzero")
    return abs(simulated - analytic) / abs(analytic)
