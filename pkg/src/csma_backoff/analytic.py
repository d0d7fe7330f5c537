"""Analytic saturation model: closed-form access probabilities, a
stationary-distribution oracle for the backoff Markov chain, the
collision/transmission fixed point and the throughput formula.

Two analytic routes exist for the half-window strategy:

* the "closed-form" path evaluates the published normalization and access
  probability expressions verbatim (with W_min taken as the minimum window);
* the "oracle" path solves the backoff chain's stationary distribution
  numerically and sums the counter-zero states.

The two agree to machine precision for the classical reset-on-success
strategy. For the half-window strategy they differ (the published closed
form truncates the stage sum); `audit_closed_form` quantifies the gap so
callers can pick a route explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .core import MacConfig, PhyParameters, SlotDurations, Strategy, compute_timing

#: Bisection tolerance on the collision probability.
P_TOL = 1e-12
#: Switch the closed-form ratios to direct geometric sums near their poles.
SINGULARITY_EPS = 1e-6


class NumericalError(RuntimeError):
    """Solver failed to converge; carries the final residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class FixedPointSolution:
    """Solved (p, pi) pair with the stationary mass behind it."""

    p: float
    pi: float
    b00: float
    stage_occupancy: np.ndarray  # b_{i,0} for i = 0..m, sums to pi
    residual: float


@dataclass(frozen=True)
class ThroughputReport:
    p_tr: float            # P(at least one transmission in a slot)
    p_s: float             # P(success | at least one transmission)
    tau: float             # saturation throughput, bits/second
    expected_slot: float   # mean virtual-slot duration, seconds


def collision_prob(pi: float, n: int) -> float:
    """Probability that at least one of the other n-1 stations transmits."""
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"pi={pi} outside [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 - (1.0 - pi) ** (n - 1)


def _check_p(p: float) -> None:
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p={p} outside [0, 1)")


def _ratio_half(p: float, m: int) -> float:
    """((1-p)^m - p^m) / ((1-2p)(1-p)^(m-1)).

    Identical to sum_{i<m} (p/(1-p))^i, which is used near the removable
    singularity at p = 1/2 to avoid cancellation.
    """
    if abs(1.0 - 2.0 * p) < SINGULARITY_EPS:
        r = p / (1.0 - p)
        return sum(r ** i for i in range(m))
    return ((1.0 - p) ** m - p ** m) / ((1.0 - 2.0 * p) * (1.0 - p) ** (m - 1))


def _ratio_third(p: float, m: int) -> float:
    """((1-p)^m - (2p)^m) / ((1-3p)(1-p)^(m-1)).

    Identical to sum_{i<m} (2p/(1-p))^i; the sum handles p = 1/3.
    """
    if abs(1.0 - 3.0 * p) < SINGULARITY_EPS:
        r = 2.0 * p / (1.0 - p)
        return sum(r ** i for i in range(m))
    return (((1.0 - p) ** m - (2.0 * p) ** m)
            / ((1.0 - 3.0 * p) * (1.0 - p) ** (m - 1)))


def b00_proposed(p: float, m: int, w_min: int) -> float:
    """Stationary mass at state (0, 0) from the published normalization."""
    _check_p(p)
    return 2.0 / (w_min + 1.0 + w_min * _ratio_third(p, m) + _ratio_half(p, m))


def pi_proposed(p: float, m: int, w_min: int) -> float:
    """Published closed-form access probability for the half-window strategy."""
    _check_p(p)
    return b00_proposed(p, m, w_min) * _ratio_half(p, m)


def pi_classical(p: float, m: int, w: int) -> float:
    """Classical binary-exponential access probability (reset on success).

    Evaluated as 2 / (w + 1 + p*w*sum_{i<m}(2p)^i), which is algebraically
    equal to 2(1-2p) / ((1-2p)(w+1) + p*w*(1-(2p)^m)) and finite at p = 1/2.
    """
    _check_p(p)
    return 2.0 / (w + 1.0 + p * w * sum((2.0 * p) ** i for i in range(m)))


@dataclass(frozen=True)
class OracleResult:
    pi: float
    stage_occupancy: np.ndarray
    residual: float


def stationary_oracle(strategy: Strategy, p: float, m: int, w: int,
                      residual_tol: float = 1e-10) -> OracleResult:
    """Stationary distribution of the backoff chain over states (stage, counter).

    Counter decrements with probability 1 per slot; at counter zero the
    station transmits, moving up one stage on collision (capped at m) and,
    on success, down one stage (half-window) or to stage zero (classical),
    redrawing the counter uniformly in the destination window.

    Solved as a sparse linear system; the L1 residual of the returned vector
    under one chain step is verified against `residual_tol`.
    """
    _check_p(p)
    windows = [(1 << i) * w for i in range(m + 1)]
    offsets = np.concatenate(([0], np.cumsum(windows)))
    n_states = int(offsets[-1])

    rows, cols, vals = [], [], []
    for i in range(m + 1):
        for k in range(windows[i]):
            s = offsets[i] + k
            if k > 0:
                rows.append(s)
                cols.append(s - 1)
                vals.append(1.0)
                continue
            up = min(i + 1, m)
            if p > 0.0:
                w_up = windows[up]
                rows.extend([s] * w_up)
                cols.extend(range(offsets[up], offsets[up] + w_up))
                vals.extend([p / w_up] * w_up)
            down = max(i - 1, 0) if strategy is Strategy.PROPOSED else 0
            w_down = windows[down]
            rows.extend([s] * w_down)
            cols.extend(range(offsets[down], offsets[down] + w_down))
            vals.extend([(1.0 - p) / w_down] * w_down)

    P = sp.csr_matrix((vals, (rows, cols)), shape=(n_states, n_states))

    # Stationary vector: x (P - I) = 0 with sum(x) = 1, one balance equation
    # replaced by the normalization row.
    A = sp.lil_matrix((P.T - sp.eye(n_states)))
    A[-1, :] = 1.0
    b = np.zeros(n_states)
    b[-1] = 1.0
    x = spla.spsolve(A.tocsr(), b)

    residual = float(np.abs(x @ P - x).sum())
    if residual > residual_tol or not np.all(np.isfinite(x)):
        raise NumericalError("stationary solve did not converge", residual)

    b0 = np.array([x[offsets[i]] for i in range(m + 1)])
    return OracleResult(pi=float(b0.sum()), stage_occupancy=b0,
                        residual=residual)


def _pi_of_p(config: MacConfig, path: str):
    """Access probability pi(p) for the selected analytic route."""
    m, w = config.max_stage, config.min_window
    if path == "closed-form":
        if config.strategy is Strategy.PROPOSED:
            return lambda p: pi_proposed(p, m, w)
        return lambda p: pi_classical(p, m, w)
    if path == "oracle":
        return lambda p: stationary_oracle(config.strategy, p, m, w).pi
    raise ValueError(f"unknown analytic path: {path!r}")


def _occupancy(config: MacConfig, p: float, pi: float,
               path: str) -> np.ndarray:
    """Per-stage transmission mass b_{i,0}, normalized to sum to pi."""
    m = config.max_stage
    if path == "oracle":
        return stationary_oracle(config.strategy, p, m,
                                 config.min_window).stage_occupancy
    if config.strategy is Strategy.PROPOSED:
        ratio = p / (1.0 - p)
    else:
        ratio = p
    weights = np.array([ratio ** i for i in range(m + 1)])
    return pi * weights / weights.sum()


def solve_fixed_point(config: MacConfig, path: str = "closed-form",
                      residual_tol: float = 1e-10) -> FixedPointSolution:
    """Solve p = 1 - (1 - pi(p))^(N-1) by bracketing bisection.

    g(p) = p - 1 + (1 - pi(p))^(N-1) is continuous with g(0) <= 0 and
    g(1-) >= 0, so plain bisection converges unconditionally.
    """
    n = config.num_stations
    pi_fn = _pi_of_p(config, path)

    if n == 1:
        p = 0.0
        pi = pi_fn(0.0)
    else:
        def g(p):
            return p - 1.0 + (1.0 - pi_fn(p)) ** (n - 1)

        lo, hi = 0.0, 1.0 - 1e-12
        if g(lo) > 0.0 or g(hi) < 0.0:
            raise NumericalError("fixed-point bracket failure",
                                 min(abs(g(lo)), abs(g(hi))))
        while hi - lo > P_TOL:
            mid = 0.5 * (lo + hi)
            if g(mid) <= 0.0:
                lo = mid
            else:
                hi = mid
        p = 0.5 * (lo + hi)
        pi = pi_fn(p)

    residual = abs(p - 1.0 + (1.0 - pi) ** (n - 1))
    if residual > residual_tol:
        raise NumericalError("fixed-point residual above tolerance", residual)

    occupancy = _occupancy(config, p, pi, path)
    b00 = float(occupancy[0])
    return FixedPointSolution(p=p, pi=pi, b00=b00,
                              stage_occupancy=occupancy, residual=residual)


def throughput(solution: FixedPointSolution, config: MacConfig,
               phy: PhyParameters,
               timing: SlotDurations | None = None) -> ThroughputReport:
    """Saturation throughput: mean payload per virtual slot over mean slot time."""
    if timing is None:
        timing = compute_timing(phy)
    n, pi = config.num_stations, solution.pi
    p_tr = 1.0 - (1.0 - pi) ** n
    if p_tr > 0.0:
        p_s = n * pi * (1.0 - pi) ** (n - 1) / p_tr
    else:
        p_s = 0.0  # silent channel; defines the 0/0 limit
    expected_slot = (p_s * p_tr * timing.t_success
                     + p_tr * (1.0 - p_s) * timing.t_collision
                     + (1.0 - p_tr) * timing.t_idle)
    tau = p_s * p_tr * phy.payload_bits / expected_slot
    return ThroughputReport(p_tr=p_tr, p_s=p_s, tau=tau,
                            expected_slot=expected_slot)


@dataclass(frozen=True)
class SweepRow:
    strategy: Strategy
    n: int
    m: int
    w: int
    solution: FixedPointSolution | None
    report: ThroughputReport | None
    error: str | None = None


SWEEP_CSV_HEADER = ("strategy,N,m,W,p,pi,b00,P_tr,P_s,"
                    "tau_bps,expected_slot_s,residual")


def sweep(strategies, n_values, m_values, w: int, phy: PhyParameters,
          path: str = "closed-form") -> list[SweepRow]:
    """Solve every (strategy, N, m) grid point in deterministic order.

    Solver failures are recorded on their row instead of aborting the sweep.
    """
    timing = compute_timing(phy)
    rows = []
    for strategy in strategies:
        for n in n_values:
            for m in m_values:
                config = MacConfig(strategy=strategy, num_stations=n,
                                   max_stage=m, min_window=w)
                try:
                    solution = solve_fixed_point(config, path=path)
                    report = throughput(solution, config, phy, timing)
                    rows.append(SweepRow(strategy, n, m, w, solution, report))
                except (NumericalError, ValueError) as exc:
                    rows.append(SweepRow(strategy, n, m, w, None, None,
                                         error=str(exc)))
    return rows


def fmt(x: float) -> str:
    """Floating-point CSV formatting: 12 significant digits."""
    return format(x, ".12g")


def sweep_csv_lines(rows) -> list[str]:
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        if row.error is not None:
            continue
        s, r = row.solution, row.report
        lines.append(",".join([
            row.strategy.value, str(row.n), str(row.m), str(row.w),
            fmt(s.p), fmt(s.pi), fmt(s.b00),
            fmt(r.p_tr), fmt(r.p_s), fmt(r.tau),
            fmt(r.expected_slot), fmt(s.residual),
        ]))
    return lines


def audit_closed_form(m_values=(3, 5, 7), w: int = 16,
                      p_grid=None) -> list[dict]:
    """Compare the published half-window closed form against the chain oracle.

    Returns one record per (m, p) grid point with both access probabilities
    and their absolute difference. The classical strategy is audited the same
    way as a control; it agrees to solver precision.
    """
    if p_grid is None:
        p_grid = [round(0.1 * i, 10) for i in range(10)]
    records = []
    for strategy in (Strategy.PROPOSED, Strategy.CLASSICAL):
        for m in m_values:
            for p in p_grid:
                if strategy is Strategy.PROPOSED:
                    closed = pi_proposed(p, m, w)
                else:
                    closed = pi_classical(p, m, w)
                oracle = stationary_oracle(strategy, p, m, w).pi
                records.append({
                    "strategy": strategy.value, "m": m, "p": p,
                    "pi_closed_form": closed, "pi_oracle": oracle,
                    "abs_diff": abs(closed - oracle),
                })
    return records
