"""Command-line front end: analytic sweeps, simulation campaigns,
analytic-vs-simulation validation, delay CDF tables and stage-occupancy
evidence, all emitted as deterministic CSV files.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import analytic, simulator, stats
from .analytic import fmt
from .core import DEFAULT_PHY, MacConfig, Strategy, load_config

DEFAULT_QS = (0.90, 0.95, 0.98, 0.99)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_int_list(text: str) -> list[int]:
    """Grid syntax: inclusive range 'a..b' or comma list 'a,b,c'."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise UsageError(f"empty range: {text}")
        return list(range(lo, hi + 1))
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc


def parse_strategies(text: str) -> list[Strategy]:
    if text == "both":
        return [Strategy.PROPOSED, Strategy.CLASSICAL]
    try:
        return [Strategy(text)]
    except ValueError as exc:
        raise UsageError(f"unknown strategy {text!r}") from exc


def _write(out_dir: str, name: str, lines, gnuplot: bool) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    if gnuplot:
        dat = [("# " if i == 0 else "") + line.replace(",", " ")
               for i, line in enumerate(lines)]
        with open(path.rsplit(".", 1)[0] + ".dat", "w") as fh:
            fh.write("\n".join(dat) + "\n")
    return path


def _build_parser() -> _Parser:
    parser = _Parser(prog="csma-backoff",
                     description="Half-window CSMA/CA backoff: analysis, "
                                 "simulation and paper-table pipelines")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sim=False):
        p.add_argument("--config", help="key/value config file ([phy]/[mac])")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--strategy", default="both",
                       choices=["proposed", "classical", "both"])
        p.add_argument("--n", default="5..50",
                       help="station counts, e.g. 5..50 or 5,10,20")
        p.add_argument("--m", default="3,5,7", help="max backoff stages")
        p.add_argument("--w", type=int, default=None,
                       help="minimum contention window (default 16)")
        p.add_argument("--gnuplot", action="store_true",
                       help="also emit space-separated .dat files")
        if sim:
            p.add_argument("--slots", type=int, default=1_000_000,
                           help="measured virtual slots per run")
            p.add_argument("--warmup", type=int, default=10_000)
            p.add_argument("--runs", type=int, default=1)
            p.add_argument("--seed", type=int, default=1)
            p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
            p.add_argument("--freeze-on-busy", action="store_true",
                           help="freeze counters during busy slots instead "
                                "of the per-virtual-slot decrement")
            p.add_argument("--delay-clock", default="channel",
                           choices=list(simulator.DELAY_CLOCKS))

    p = sub.add_parser("analytic", help="fixed-point sweep and throughput")
    common(p)
    p.add_argument("--path", default="closed-form",
                   choices=["closed-form", "oracle"])

    p = sub.add_parser("simulate", help="Monte-Carlo runs, metrics + delays")
    common(p, sim=True)

    p = sub.add_parser("validate",
                       help="relative error, simulation vs chain oracle")
    common(p, sim=True)

    p = sub.add_parser("delay-cdf", help="pooled delay quantiles and gains")
    common(p, sim=True)
    p.add_argument("--q", default="0.90,0.95,0.98,0.99",
                   help="quantile levels, comma list")

    p = sub.add_parser("occupancy",
                       help="per-stage transmission histograms vs analysis")
    common(p, sim=True)
    return parser


def _load(args):
    if args.config:
        phy, mac = load_config(args.config)
    else:
        phy, mac = DEFAULT_PHY, MacConfig()
    if args.w is not None:
        mac = replace(mac, min_window=args.w)
    return phy, mac


def _grid(args, mac):
    return (parse_strategies(args.strategy), parse_int_list(args.n),
            parse_int_list(args.m), mac.min_window)


def _sim_config(args, phy, mac, strategy, n, m, seed):
    return simulator.SimConfig(
        mac=replace(mac, strategy=strategy, num_stations=n, max_stage=m),
        phy=phy, num_virtual_slots=args.slots + args.warmup, seed=seed,
        warmup_slots=args.warmup, freeze_on_busy=args.freeze_on_busy,
        delay_clock=args.delay_clock)


def cmd_analytic(args) -> int:
    phy, mac = _load(args)
    strategies, n_values, m_values, w = _grid(args, mac)
    rows = analytic.sweep(strategies, n_values, m_values, w, phy,
                          path=args.path)
    failed = False
    for row in rows:
        if row.error is not None:
            print(f"{row.strategy.value} N={row.n} m={row.m}: "
                  f"FAILED {row.error}")
            failed = True
        else:
            print(f"{row.strategy.value} N={row.n} m={row.m}: "
                  f"p={row.solution.p:.6f} pi={row.solution.pi:.6f} "
                  f"tau={row.report.tau:.1f} bps")
    path = _write(args.out, "analytic.csv", analytic.sweep_csv_lines(rows),
                  args.gnuplot)
    print(f"wrote {path}")
    return 2 if failed else 0


def _run_grid(args, phy, mac):
    """All (strategy, N, m) x replicate runs, in deterministic grid order."""
    strategies, n_values, m_values, _ = _grid(args, mac)
    grid = [(s, n, m) for s in strategies for n in n_values
            for m in m_values]
    results = []
    for strategy, n, m in grid:
        base = _sim_config(args, phy, mac, strategy, n, m, args.seed)
        results.append(((strategy, n, m),
                        simulator.replicate(base, args.runs, args.seed,
                                            jobs=args.jobs)))
    return results


def cmd_simulate(args) -> int:
    phy, mac = _load(args)
    lines = [simulator.METRICS_CSV_HEADER]
    for (strategy, n, m), runs in _run_grid(args, phy, mac):
        for metrics in runs:
            lines.append(simulator.metrics_csv_line(metrics))
            _write(args.out, simulator.delay_csv_filename(metrics),
                   simulator.delay_csv_lines(metrics), args.gnuplot)
            print(f"{strategy.value} N={n} m={m} seed={metrics.seed}: "
                  f"tput={metrics.throughput_bps:.1f} bps "
                  f"(rng={metrics.rng_algorithm})")
    path = _write(args.out, "metrics.csv", lines, args.gnuplot)
    print(f"wrote {path}")
    return 0


def cmd_validate(args) -> int:
    phy, mac = _load(args)
    lines = ["strategy,N,m,W,slots,seed,tau_sim_bps,tau_analytic_bps,"
             "relative_error"]
    worst = 0.0
    for (strategy, n, m), runs in _run_grid(args, phy, mac):
        config = MacConfig(strategy=strategy, num_stations=n, max_stage=m,
                           min_window=mac.min_window)
        solution = analytic.solve_fixed_point(config, path="oracle")
        tau = analytic.throughput(solution, config, phy).tau
        for metrics in runs:
            err = stats.relative_error(metrics.throughput_bps, tau)
            worst = max(worst, err)
            lines.append(",".join([
                strategy.value, str(n), str(m), str(mac.min_window),
                str(metrics.measured_slots), str(metrics.seed),
                fmt(metrics.throughput_bps), fmt(tau), fmt(err)]))
            print(f"{strategy.value} N={n} m={m} seed={metrics.seed}: "
                  f"sim={metrics.throughput_bps:.1f} analytic={tau:.1f} "
                  f"relerr={err:.5f}")
    path = _write(args.out, "validation.csv", lines, args.gnuplot)
    print(f"wrote {path}; max relative error {worst:.5f}")
    return 0


def cmd_delay_cdf(args) -> int:
    phy, mac = _load(args)
    qs = [float(part) for part in args.q.split(",") if part]
    strategies, n_values, m_values, _ = _grid(args, mac)
    pooled = {}
    q_lines = ["strategy,N,m,q,delay_s"]
    for (strategy, n, m), runs in _run_grid(args, phy, mac):
        ecdf = stats.Ecdf(np.concatenate([r.delay_samples for r in runs]))
        pooled[(strategy, n, m)] = ecdf
        for q in qs:
            q_lines.append(",".join([strategy.value, str(n), str(m),
                                     fmt(q), fmt(ecdf.quantile(q))]))
            print(f"{strategy.value} N={n} m={m} q={q}: "
                  f"{ecdf.quantile(q) * 1e3:.2f} ms")
    path = _write(args.out, "quantiles.csv", q_lines, args.gnuplot)
    print(f"wrote {path}")

    if set(strategies) == {Strategy.PROPOSED, Strategy.CLASSICAL}:
        for n in n_values:
            for m in m_values:
                prop = pooled[(Strategy.PROPOSED, n, m)]
                clas = pooled[(Strategy.CLASSICAL, n, m)]
                lines = ["q,proposed_ms,classical_ms,gain_pct"]
                for q in qs:
                    d_p = prop.quantile(q) * 1e3
                    d_c = clas.quantile(q) * 1e3
                    lines.append(",".join([
                        fmt(q), fmt(d_p), fmt(d_c),
                        fmt(stats.gain_percent(d_p, d_c))]))
                path = _write(args.out, f"gains_N{n}_m{m}.csv", lines,
                              args.gnuplot)
                print(f"wrote {path}")
    return 0


def cmd_occupancy(args) -> int:
    phy, mac = _load(args)
    lines = ["strategy,N,m,stage,sim_attempt_fraction,analytic_fraction"]
    stage0 = {}
    for (strategy, n, m), runs in _run_grid(args, phy, mac):
        hist = np.sum([r.stage_tx_histogram for r in runs], axis=0)
        frac = hist / hist.sum()
        config = MacConfig(strategy=strategy, num_stations=n, max_stage=m,
                           min_window=mac.min_window)
        solution = analytic.solve_fixed_point(config, path="oracle")
        ana = solution.stage_occupancy / solution.pi
        for stage in range(m + 1):
            lines.append(",".join([strategy.value, str(n), str(m),
                                   str(stage), fmt(frac[stage]),
                                   fmt(ana[stage])]))
        stage0[(strategy, n, m)] = frac[0]
        print(f"{strategy.value} N={n} m={m}: stage-0 attempt fraction "
              f"{frac[0]:.4f} (analytic {ana[0]:.4f})")
    path = _write(args.out, "occupancy.csv", lines, args.gnuplot)
    print(f"wrote {path}")
    return 0


_COMMANDS = {
    "analytic": cmd_analytic,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
    "delay-cdf": cmd_delay_cdf,
    "occupancy": cmd_occupancy,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (analytic.NumericalError, simulator.EmptyMeasurementError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
