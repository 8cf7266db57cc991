import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qosguard.traffic import (
    ArrivalWindow,
    ClassSpec,
    RateEstimateUnavailable,
    TrafficProfile,
    generate_arrivals,
    sample_holding_time,
)


class TestArrivalWindow:
    def test_first_arrival_defines_no_gap(self):
        w = ArrivalWindow(1, capacity=5)
        w.record_arrival(5.0)
        assert list(w.gaps) == []
        assert w.last_arrival == 5.0

    def test_gap_is_difference(self):
        w = ArrivalWindow(1, capacity=5)
        for t in [3.0, 5.0, 8.0]:
            w.record_arrival(t)
        assert list(w.gaps) == [2.0, 3.0]
        assert w.last_arrival == 8.0

    def test_fifo_eviction_at_capacity(self):
        w = ArrivalWindow(1, capacity=3)
        for t in [7.0, 8.0, 9.0, 10.0]:
            w.record_arrival(t)
        assert list(w.gaps) == [1.0, 1.0, 1.0]
        w.record_arrival(12.0)
        assert list(w.gaps) == [1.0, 1.0, 2.0]
        assert w.last_arrival == 12.0

    def test_non_increasing_timestamp_rejected(self):
        w = ArrivalWindow(1, capacity=3)
        w.record_arrival(5.0)
        with pytest.raises(ValueError):
            w.record_arrival(5.0)
        with pytest.raises(ValueError):
            w.record_arrival(4.0)

    def test_estimate_equal_gaps(self):
        w = ArrivalWindow(1, capacity=10)
        for t in [0.0, 2.0, 4.0, 6.0, 8.0]:
            w.record_arrival(t)
        assert w.estimate_rate() == pytest.approx(0.5, abs=1e-15)

    def test_estimate_two_gaps(self):
        w = ArrivalWindow(1, capacity=10)
        for t in [0.0, 1.0, 4.0]:
            w.record_arrival(t)
        assert w.estimate_rate() == pytest.approx(0.5)

    def test_empty_window_unavailable(self):
        w = ArrivalWindow(1, capacity=10)
        with pytest.raises(RateEstimateUnavailable):
            w.estimate_rate()
        w.record_arrival(1.0)  # still no gap
        with pytest.raises(RateEstimateUnavailable):
            w.estimate_rate()

    def test_estimator_mean_close_to_true_rate(self):
        # Monte Carlo over independent windows of exponential gaps
        rng = np.random.default_rng(42)
        lam, n, windows = 0.4, 100, 10_000
        gaps = rng.exponential(1 / lam, size=(windows, n))
        estimates = n / gaps.sum(axis=1)
        assert abs(estimates.mean() - lam) / lam < 0.02

    @given(
        gaps=st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=50),
        scale=st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_scale_equivariance(self, gaps, scale):
        def build(values):
            w = ArrivalWindow(1, capacity=len(values))
            t = 0.0
            w.record_arrival(t)
            for g in values:
                t += g
                w.record_arrival(t)
            return w.estimate_rate()

        base = build(gaps)
        scaled = build([g * scale for g in gaps])
        assert scaled == pytest.approx(base / scale, rel=1e-9)

    @given(
        times=st.lists(
            st.floats(min_value=1e-3, max_value=10.0), min_size=1, max_size=40
        ),
        capacity=st.integers(min_value=1, max_value=8),
    )
    def test_retains_most_recent_gaps(self, times, capacity):
        w = ArrivalWindow(1, capacity=capacity)
        t = 0.0
        all_gaps = []
        w.record_arrival(t)
        for g in times:
            t += g
            w.record_arrival(t)
            all_gaps.append(g)
        assert len(w.gaps) <= capacity
        expected = all_gaps[-capacity:]
        assert list(w.gaps) == pytest.approx(expected)


class TestGenerateArrivals:
    def test_zero_rate_empty(self):
        assert len(generate_arrivals(0.0, 100.0, seed=1)) == 0

    def test_count_concentration(self):
        horizon = 1e5
        times = generate_arrivals(1.0, horizon, seed=123)
        assert abs(len(times) - horizon) < 3 * math.sqrt(horizon)

    def test_seeded_determinism(self):
        a = generate_arrivals(2.0, 500.0, seed=9)
        b = generate_arrivals(2.0, 500.0, seed=9)
        np.testing.assert_array_equal(a, b)

    def test_strictly_increasing_and_bounded(self):
        times = generate_arrivals(5.0, 200.0, seed=4)
        assert np.all(np.diff(times) > 0)
        assert times[-1] <= 200.0
        assert times[0] > 0

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            generate_arrivals(-1.0, 10.0, seed=0)
        with pytest.raises(ValueError):
            generate_arrivals(1.0, -10.0, seed=0)


class TestHoldingTime:
    def test_mean_matches_paper_scale(self):
        rng = np.random.default_rng(0)
        mu = 1 / 120
        samples = np.array([sample_holding_time(mu, rng) for _ in range(100_000)])
        # CLT: sd of the mean is 120/sqrt(1e5) ~ 0.38 s
        assert samples.mean() == pytest.approx(120.0, abs=1.5)
        assert np.all(samples > 0)

    def test_variance(self):
        rng = np.random.default_rng(1)
        samples = np.array([sample_holding_time(1.0, rng) for _ in range(300_000)])
        assert samples.var() == pytest.approx(1.0, rel=0.02)

    def test_reproducible(self):
        a = sample_holding_time(0.5, np.random.default_rng(7))
        b = sample_holding_time(0.5, np.random.default_rng(7))
        assert a == b

    def test_invalid_mu(self):
        with pytest.raises(ValueError):
            sample_holding_time(0.0, np.random.default_rng(0))
        with pytest.raises(ValueError):
            sample_holding_time(-1.0, np.random.default_rng(0))


class TestProfile:
    def test_total_rate_recomputed(self):
        p = TrafficProfile.from_rates([0.3, 0.4, 0.2, 0.1])
        assert p.total_rate == pytest.approx(1.0)
        assert p.num_classes == 4
        assert p.rates == (0.3, 0.4, 0.2, 0.1)

    def test_contiguous_indices_enforced(self):
        with pytest.raises(ValueError):
            TrafficProfile(classes=(ClassSpec(2, "x", 1.0),))

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            ClassSpec(1, "x", -0.5)
        with pytest.raises(ValueError):
            ClassSpec(1, "x", math.inf)
