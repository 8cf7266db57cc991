"""Event-driven simulator of the closed admission loop.

Per-class Poisson arrivals feed sliding-window rate estimators; every arrival
recomputes the guard partition (dynamic policy) and is admitted iff the
occupancy is below its class limit. Departures are exponential. Runs are
deterministic for a fixed scenario, and both policies can be replayed on the
identical random draws for paired comparison.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .allocator import SystemConfig, compute_partition
from .traffic import ArrivalWindow, TrafficProfile

POLICY_DYNAMIC = "dynamic"
POLICY_SHARING = "sharing"

_RNG_CHUNK = 8192

# event-kind ranks: at equal timestamps a departure frees its channel before
# any arrival is tested, then arrivals go by class index
_DEPARTURE = 0
_ARRIVAL = 1


@dataclass(frozen=True)
class SimScenario:
    config: SystemConfig
    profile: TrafficProfile
    arrivals: int = 1_000_000        # total arrivals simulated (all classes)
    seed: int = 0
    policy: str = POLICY_DYNAMIC
    warmup: float = 0.1              # fraction of arrivals excluded from metrics
    bypass_estimator: bool = False   # use true rates instead of window estimates
    trace_stride: int = 1000         # record traces every this many arrivals
    record_events: bool = False

    def __post_init__(self):
        if self.arrivals < 1:
            raise ValueError(f"arrivals must be >= 1, got {self.arrivals}")
        if not 0 <= self.warmup < 1:
            raise ValueError(f"warmup must be in [0, 1), got {self.warmup}")
        if self.policy not in (POLICY_DYNAMIC, POLICY_SHARING):
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.trace_stride < 1:
            raise ValueError(f"trace_stride must be >= 1, got {self.trace_stride}")


@dataclass
class SimMetrics:
    per_class_arrivals: tuple[int, ...]
    per_class_blocks: tuple[int, ...]
    per_class_admissions: tuple[int, ...]
    empirical_blocking: tuple[float, ...]
    utilization: float
    duration: float                                  # measured interval, seconds
    partition_trace: list = field(default_factory=list)   # (time, y_1..y_M)
    estimator_trace: list = field(default_factory=list)   # (time, est_1..est_M)
    events: list | None = None                       # (time, kind, class, decision, occupied)


class _ExpStream:
    """Buffered exponential draws from one dedicated generator."""

    def __init__(self, seed_seq: np.random.SeedSequence, mean: float):
        self.rng = np.random.default_rng(seed_seq)
        self.mean = mean
        self._buf = np.empty(0)
        self._pos = 0

    def next(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = self.rng.exponential(self.mean, size=_RNG_CHUNK)
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return v


def run_simulation(scenario: SimScenario) -> SimMetrics:
    config = scenario.config
    profile = scenario.profile
    m_count = profile.num_classes
    true_rates = profile.rates
    n = config.n_channels
    mean_hold = 1.0 / config.mu
    dynamic = scenario.policy == POLICY_DYNAMIC

    seeds = np.random.SeedSequence(scenario.seed).spawn(2 * m_count)
    arrival_streams = [
        _ExpStream(seeds[m], 1.0 / true_rates[m]) if true_rates[m] > 0 else None
        for m in range(m_count)
    ]
    holding_streams = [_ExpStream(seeds[m_count + m], mean_hold) for m in range(m_count)]
    windows = [ArrivalWindow(m + 1, config.window_n) for m in range(m_count)]

    sharing_limits = (n,) * m_count
    base_partition = compute_partition(config, true_rates) if sum(true_rates) > 0 else None
    cached_rates: tuple | None = None
    cached_limits = sharing_limits
    cached_access = (config.guard,) * m_count

    # heap entries: (time, kind_rank, class_index, seq, ...)
    heap: list = []
    seq = 0
    for m in range(m_count):
        stream = arrival_streams[m]
        if stream is not None:
            heapq.heappush(heap, (stream.next(), _ARRIVAL, m + 1, seq))
            seq += 1

    total_target = scenario.arrivals
    warmup_count = int(scenario.warmup * total_target)
    arrivals_seen = 0
    occupied = 0
    arr_counts = [0] * m_count
    block_counts = [0] * m_count
    admit_counts = [0] * m_count
    in_measurement = warmup_count == 0
    measure_start = 0.0
    area = 0.0          # integral of occupancy over the measured interval
    last_t = 0.0
    partition_trace: list = []
    estimator_trace: list = []
    events: list | None = [] if scenario.record_events else None

    while heap and arrivals_seen < total_target:
        t, kind, cls, _ = heapq.heappop(heap)
        if in_measurement:
            area += occupied * (t - last_t)
        last_t = t

        if kind == _DEPARTURE:
            occupied -= 1
            if events is not None:
                events.append((t, "departure", cls, "release", occupied))
            continue

        m = cls - 1
        arrivals_seen += 1
        # schedule this class's next arrival
        heapq.heappush(heap, (t + arrival_streams[m].next(), _ARRIVAL, cls, seq))
        seq += 1
        # holding time is drawn whether or not the call is admitted, so paired
        # policy runs see identical sample paths
        hold = holding_streams[m].next()

        window = windows[m]
        window.record_arrival(t)

        if dynamic:
            if scenario.bypass_estimator:
                limits = base_partition.limits
                access = base_partition.guard_access
                rates_vec = None
            else:
                if all(w.has_estimate for w in windows):
                    rates_vec = tuple(w.estimate_rate() for w in windows)
                else:
                    rates_vec = true_rates if sum(true_rates) > 0 else (1.0,) * m_count
                if rates_vec != cached_rates:
                    part = compute_partition(config, rates_vec)
                    cached_rates = rates_vec
                    cached_limits = part.limits
                    cached_access = part.guard_access
                limits = cached_limits
                access = cached_access
        else:
            limits = sharing_limits
            access = (config.guard,) * m_count
            rates_vec = None

        accepted = occupied < limits[m]
        if accepted:
            occupied += 1
            heapq.heappush(heap, (t + hold, _DEPARTURE, cls, seq))
            seq += 1

        if arrivals_seen > warmup_count:
            if not in_measurement:
                in_measurement = True
                measure_start = t
            arr_counts[m] += 1
            if accepted:
                admit_counts[m] += 1
            else:
                block_counts[m] += 1

        if arrivals_seen % scenario.trace_stride == 0:
            partition_trace.append((t,) + tuple(access))
            if rates_vec is not None:
                estimator_trace.append((t,) + rates_vec)
        if events is not None:
            events.append((t, "arrival", cls, "accept" if accepted else "block", occupied))

    duration = max(last_t - measure_start, 0.0)
    blocking = tuple(
        block_counts[m] / arr_counts[m] if arr_counts[m] else 0.0 for m in range(m_count)
    )
    utilization = area / (duration * n) if duration > 0 else 0.0
    return SimMetrics(
        per_class_arrivals=tuple(arr_counts),
        per_class_blocks=tuple(block_counts),
        per_class_admissions=tuple(admit_counts),
        empirical_blocking=blocking,
        utilization=utilization,
        duration=duration,
        partition_trace=partition_trace,
        estimator_trace=estimator_trace,
        events=events,
    )


def compare_policies(scenario: SimScenario) -> tuple[SimMetrics, SimMetrics]:
    """Run dynamic reservation and complete sharing on identical random draws."""
    from dataclasses import replace

    dyn = run_simulation(replace(scenario, policy=POLICY_DYNAMIC))
    share = run_simulation(replace(scenario, policy=POLICY_SHARING))
    return dyn, share
