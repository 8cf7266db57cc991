"""Command-line front end: analytic sweeps, simulations, paired policy
comparisons, and VLC link budgets, all emitted as CSV plus a manifest.

Exit codes: 0 success, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

from . import markov, vlc
from .allocator import compute_partition, equal_split_partition
from .config import MODES, ConfigError, ExperimentSpec, parse_config, render_manifest
from .simulate import SimScenario, compare_policies, run_simulation
from .traffic import TrafficProfile


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _rates_for_point(spec: ExperimentSpec, lambda_total: float) -> tuple[float, ...]:
    ratio = spec.ratio if spec.ratio is not None else spec.profile.rates
    total = sum(ratio)
    return tuple(r / total * lambda_total for r in ratio)


def _analytic_point(spec, rates):
    """Analytic B_m, utilization for the dynamic partition plus the
    complete-sharing baseline at the same total load."""
    config = spec.config
    if sum(rates) > 0:
        partition = compute_partition(config, rates)
    else:
        partition = equal_split_partition(config, len(rates))
    ss = markov.steady_state(config, partition, rates)
    report = markov.blocking_probabilities(ss, partition)
    offered = sum(rates) / config.mu
    b_sharing = markov.erlang_b(config.n_channels, offered)
    util_sharing = offered * (1 - b_sharing) / config.n_channels
    return partition, report, b_sharing, util_sharing


def _sweep_points(spec: ExperimentSpec):
    """Rate vectors for each sweep point, with the swept value labelled."""
    if spec.lambda_1_grid is not None:
        if spec.profile is None:
            raise ConfigError(
                "[sweep] lambda_1 sweep needs [traffic] rates for the fixed classes"
            )
        fixed = spec.profile.rates[1:]
        return [("lambda_1", l1, (l1,) + fixed) for l1 in spec.lambda_1_grid]
    if spec.lambda_total_grid is not None:
        if spec.ratio is None and spec.profile is None:
            raise ConfigError("[sweep] lambda_total sweep needs [traffic] ratio or rates")
        return [
            ("lambda_T", lt, _rates_for_point(spec, lt)) for lt in spec.lambda_total_grid
        ]
    if spec.profile is None:
        raise ConfigError("[traffic] rates required when no sweep grid is given")
    rates = spec.profile.rates
    return [("lambda_T", sum(rates), rates)]


def _mode_analyze(spec: ExperimentSpec, out: Path) -> None:
    points = _sweep_points(spec)
    m_count = len(points[0][2])
    blocking_rows, util_rows, partition_rows = [], [], []
    for _, value, rates in points:
        partition, report, b_sharing, util_sharing = _analytic_point(spec, rates)
        lam_t = sum(rates)
        blocking_rows.append(
            (lam_t, *report.per_class, report.utilization, b_sharing, util_sharing)
        )
        util_rows.append((lam_t, report.utilization, util_sharing))
        partition_rows.append((value, *partition.guard_access))
    label = points[0][0]
    _write_csv(
        out / "blocking.csv",
        ["lambda_T"]
        + [f"B_{m}" for m in range(1, m_count + 1)]
        + ["utilization", "B_sharing", "util_sharing"],
        blocking_rows,
    )
    _write_csv(out / "utilization.csv", ["lambda_T", "utilization", "util_sharing"], util_rows)
    _write_csv(
        out / "partition_trace.csv",
        [label] + [f"y_{m}" for m in range(1, m_count + 1)],
        partition_rows,
    )


def _scenario(spec: ExperimentSpec, rates, seed: int) -> SimScenario:
    return SimScenario(
        config=spec.config,
        profile=TrafficProfile.from_rates(rates),
        arrivals=spec.arrivals,
        seed=seed,
        policy=spec.policy,
        warmup=spec.warmup,
        bypass_estimator=spec.bypass_estimator,
        trace_stride=spec.trace_stride,
        record_events=spec.events,
    )


def _sim_rows(metrics, m_count):
    blocking = [
        (m + 1, metrics.per_class_arrivals[m], metrics.per_class_blocks[m],
         metrics.empirical_blocking[m])
        for m in range(m_count)
    ]
    return blocking


def _mode_simulate(spec: ExperimentSpec, out: Path) -> None:
    if spec.profile is None:
        raise ConfigError("[traffic] rates required for simulate mode")
    rates = spec.profile.rates
    m_count = len(rates)
    blocking_rows, util_rows, partition_rows, event_rows = [], [], [], []
    for rep in range(spec.replications):
        metrics = run_simulation(_scenario(spec, rates, spec.seed + rep))
        for cls, arr, blk, emp in _sim_rows(metrics, m_count):
            blocking_rows.append((rep, cls, arr, blk, emp))
        util_rows.append((rep, metrics.utilization, metrics.duration))
        for rec in metrics.partition_trace:
            partition_rows.append((rep, *rec))
        if metrics.events is not None:
            event_rows.extend((rep, *ev) for ev in metrics.events)
    _write_csv(
        out / "blocking.csv",
        ["replication", "class", "arrivals", "blocks", "empirical_blocking"],
        blocking_rows,
    )
    _write_csv(out / "utilization.csv", ["replication", "utilization", "duration"], util_rows)
    _write_csv(
        out / "partition_trace.csv",
        ["replication", "time"] + [f"y_{m}" for m in range(1, m_count + 1)],
        partition_rows,
    )
    if spec.events:
        _write_csv(
            out / "events.csv",
            ["replication", "time", "kind", "class", "decision", "occupied_after"],
            event_rows,
        )


def _mode_compare(spec: ExperimentSpec, out: Path) -> None:
    if spec.profile is None:
        raise ConfigError("[traffic] rates required for compare mode")
    rates = spec.profile.rates
    m_count = len(rates)
    blocking_rows, util_rows = [], []
    for rep in range(spec.replications):
        dyn, share = compare_policies(_scenario(spec, rates, spec.seed + rep))
        for policy, metrics in (("dynamic", dyn), ("sharing", share)):
            for cls, arr, blk, emp in _sim_rows(metrics, m_count):
                blocking_rows.append((rep, policy, cls, arr, blk, emp))
            util_rows.append((rep, policy, metrics.utilization, metrics.duration))
    _write_csv(
        out / "blocking.csv",
        ["replication", "policy", "class", "arrivals", "blocks", "empirical_blocking"],
        blocking_rows,
    )
    _write_csv(
        out / "utilization.csv",
        ["replication", "policy", "utilization", "duration"],
        util_rows,
    )


def _mode_sweep(spec: ExperimentSpec, out: Path) -> None:
    points = _sweep_points(spec)
    m_count = len(points[0][2])
    blocking_rows, util_rows = [], []
    for _, _, rates in points:
        lam_t = sum(rates)
        _, report, _, _ = _analytic_point(spec, rates)
        for rep in range(spec.replications):
            metrics = run_simulation(_scenario(spec, rates, spec.seed + rep))
            for m in range(m_count):
                blocking_rows.append(
                    (
                        lam_t,
                        rep,
                        m + 1,
                        metrics.per_class_arrivals[m],
                        metrics.empirical_blocking[m],
                        report.per_class[m],
                    )
                )
            util_rows.append((lam_t, rep, metrics.utilization, report.utilization))
    _write_csv(
        out / "blocking.csv",
        ["lambda_T", "replication", "class", "arrivals", "empirical_blocking", "analytic_blocking"],
        blocking_rows,
    )
    _write_csv(
        out / "utilization.csv",
        ["lambda_T", "replication", "utilization", "analytic_utilization"],
        util_rows,
    )


def _mode_vlc_link(spec: ExperimentSpec, out: Path) -> None:
    p = spec.vlc
    params = vlc.OpticalLinkParams(
        half_power_angle=p.half_power_angle,
        detector_area=p.detector_area,
        distance=p.distance,
        irradiance_angle=p.irradiance_angle,
        incidence_angle=p.incidence_angle,
        fov=p.fov,
        filter_coeff=p.filter_coeff,
        refractive_index=p.refractive_index,
    )
    tau = vlc.lambertian_order(p.half_power_angle)
    g = vlc.concentrator_gain(p.incidence_angle, p.fov, p.refractive_index)
    h = vlc.los_channel_gain(params)
    pr = vlc.received_power(p.transmit_power, h)
    _write_csv(
        out / "link_budget.csv",
        [
            "half_power_angle", "detector_area", "distance", "irradiance_angle",
            "incidence_angle", "fov", "filter_coeff", "refractive_index",
            "lambertian_order", "concentrator_gain", "channel_gain",
            "transmit_power", "received_power",
        ],
        [
            (
                p.half_power_angle, p.detector_area, p.distance, p.irradiance_angle,
                p.incidence_angle, p.fov, p.filter_coeff, p.refractive_index,
                tau, g, h, p.transmit_power, pr,
            )
        ],
    )
    _write_csv(
        out / "color_bands.csv",
        ["band", "low_nm", "high_nm", "width_nm"],
        [(i, lo, hi, hi - lo) for i, lo, hi in vlc.BAND_PLAN],
    )


_MODE_RUNNERS = {
    "analyze": _mode_analyze,
    "simulate": _mode_simulate,
    "compare": _mode_compare,
    "sweep": _mode_sweep,
    "vlc-link": _mode_vlc_link,
}


def run_experiment(spec: ExperimentSpec, mode: str, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _MODE_RUNNERS[mode](spec, out)
    (out / "manifest.txt").write_text(render_manifest(spec, mode))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qosguard",
        description="Dynamic guard-channel admission control: analysis, simulation, VLC link budgets.",
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="experiment config file (INI)")
    parser.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--arrivals", type=int, default=None, help="override simulated arrivals")
    parser.add_argument("--policy", choices=["dynamic", "sharing"], default=None)
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"qosguard: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        spec = parse_config(text)
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
        if args.arrivals is not None:
            spec = replace(spec, arrivals=args.arrivals)
        if args.policy is not None:
            spec = replace(spec, policy=args.policy)
    except ConfigError as exc:
        print(f"qosguard: config error: {exc}", file=sys.stderr)
        return 2
    try:
        run_experiment(spec, args.mode, args.out)
    except ConfigError as exc:
        print(f"qosguard: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qosguard: I/O error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"qosguard: error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
