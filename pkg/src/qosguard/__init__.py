"""Dynamic guard-channel call admission control for multi-class traffic.

Exact birth-death analysis of per-class blocking, a deterministic
discrete-event simulator with online arrival-rate estimation, and a VLC
optical-channel companion.
"""

from .allocator import (
    ChannelPartition,
    DegenerateRatesError,
    SystemConfig,
    accessible_guard,
    admit,
    compute_partition,
    equal_split_partition,
    reserved_shares,
)
from .markov import (
    BlockingReport,
    SteadyState,
    TranscriptionDiscrepancy,
    blocking_probabilities,
    closed_form_blocking,
    erlang_b,
    state_arrival_rate,
    steady_state,
)
from .simulate import SimMetrics, SimScenario, compare_policies, run_simulation
from .traffic import (
    ArrivalWindow,
    ClassSpec,
    RateEstimateUnavailable,
    TrafficProfile,
    generate_arrivals,
    sample_holding_time,
)

__all__ = [
    "ArrivalWindow",
    "BlockingReport",
    "ChannelPartition",
    "ClassSpec",
    "DegenerateRatesError",
    "RateEstimateUnavailable",
    "SimMetrics",
    "SimScenario",
    "SteadyState",
    "SystemConfig",
    "TrafficProfile",
    "TranscriptionDiscrepancy",
    "accessible_guard",
    "admit",
    "blocking_probabilities",
    "closed_form_blocking",
    "compare_policies",
    "compute_partition",
    "equal_split_partition",
    "erlang_b",
    "generate_arrivals",
    "reserved_shares",
    "run_simulation",
    "sample_holding_time",
    "state_arrival_rate",
    "steady_state",
]

__version__ = "0.1.0"
