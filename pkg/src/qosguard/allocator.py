"""Dynamic guard-channel partition and the admit/reject decision.

Out of N channels, Gamma are reserved dynamically: class m receives a share
of the guard pool proportional to its arrival rate, and may access the
floor of the suffix sum of shares from its own class down to the lowest
priority. Class 1 can always reach all N channels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

# Snap applied before floor(): suffix sums that are integers in exact
# arithmetic may land a few ulps low in floats (e.g. 0.7/1.0*10).
_FLOOR_SNAP = 1e-9


class DegenerateRatesError(Exception):
    """All arrival rates are zero; the proportional split is undefined."""


@dataclass(frozen=True)
class SystemConfig:
    n_channels: int          # N
    guard: int               # Gamma
    mu: float                # per-call service rate, 1/holding-time
    window_n: int            # estimator window size in gaps

    def __post_init__(self):
        if self.n_channels < 1:
            raise ValueError(f"n_channels must be >= 1, got {self.n_channels}")
        if not 0 <= self.guard <= self.n_channels:
            raise ValueError(
                f"guard must satisfy 0 <= guard <= n_channels, got {self.guard}"
            )
        if self.mu <= 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if self.window_n < 1:
            raise ValueError(f"window_n must be >= 1, got {self.window_n}")
        if self.guard > self.n_channels / 2:
            warnings.warn(
                f"guard pool {self.guard} exceeds half the channel pool "
                f"({self.n_channels}); utilization may suffer",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ChannelPartition:
    shares: tuple[float, ...]       # X_m, real guard-pool shares
    guard_access: tuple[int, ...]   # y_m, guard channels reachable by class m
    limits: tuple[int, ...]         # N_m, total channels reachable by class m
    rates_used: tuple[float, ...]   # the rate vector the partition came from


def reserved_shares(rates, gamma: int) -> tuple[float, ...]:
    """Guard-pool share per class: X_m = (rate_m / total) * gamma."""
    rates = tuple(float(r) for r in rates)
    for m, r in enumerate(rates, start=1):
        if not math.isfinite(r) or r < 0:
            raise ValueError(f"rate for class {m} must be finite and >= 0, got {r}")
    total = sum(rates)
    if total <= 0:
        raise DegenerateRatesError("all arrival rates are zero")
    return tuple(r / total * gamma for r in rates)


def accessible_guard(shares, m: int) -> int:
    """Guard channels class m may use: floor of the suffix sum X_m + ... + X_M."""
    shares = tuple(shares)
    if not 1 <= m <= len(shares):
        raise ValueError(f"class index {m} out of range 1..{len(shares)}")
    return math.floor(sum(shares[m - 1:]) + _FLOOR_SNAP)


def compute_partition(config: SystemConfig, rates) -> ChannelPartition:
    """Full per-class partition (X_m, y_m, N_m) for the given rate vector."""
    shares = reserved_shares(rates, config.guard)
    m_count = len(shares)
    guard_access = tuple(accessible_guard(shares, m) for m in range(1, m_count + 1))
    limits = tuple(config.n_channels - config.guard + y for y in guard_access)
    return ChannelPartition(
        shares=shares,
        guard_access=guard_access,
        limits=limits,
        rates_used=tuple(float(r) for r in rates),
    )


def equal_split_partition(config: SystemConfig, num_classes: int) -> ChannelPartition:
    """Fallback partition for an all-zero rate vector: equal guard shares."""
    return compute_partition(config, (1.0,) * num_classes)


def admit(occupied: int, class_index: int, partition: ChannelPartition) -> bool:
    """True iff a class-``class_index`` call is accepted at the given occupancy."""
    limits = partition.limits
    if not 1 <= class_index <= len(limits):
        raise ValueError(f"class index {class_index} out of range 1..{len(limits)}")
    if occupied < 0 or occupied > limits[0]:
        raise ValueError(f"occupied count {occupied} outside 0..{limits[0]}")
    return occupied < limits[class_index - 1]
