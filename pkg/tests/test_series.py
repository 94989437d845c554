from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aircast.errors import (
    EmptySeriesError,
    GranularityError,
    LengthError,
    SeedError,
    SplitError,
)
from aircast.series import (
    Granularity,
    SplitSpec,
    TimeSeries,
    difference,
    interpolate_gaps,
    inverse_difference,
    resample_mean,
    split_holdout,
)

from conftest import BASE_EPOCH, DAY, HOUR, daily_series, hourly_series


def assert_valid(series: TimeSeries) -> None:
    """Strict ordering + alignment must hold after every operation."""
    assert np.all(np.diff(series.at) > 0)
    step = series.granularity.step_seconds
    if step is not None:
        assert np.all((series.at + 7200) % step == 0)


class TestTimeSeriesInvariants:
    def test_rejects_duplicate_instants(self):
        with pytest.raises(ValueError):
            TimeSeries(Granularity.RAW, np.array([1, 1]), np.array([2.0, 3.0]))

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            TimeSeries(Granularity.RAW, np.array([5, 1]), np.array([2.0, 3.0]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            TimeSeries(Granularity.RAW, np.array([1]), np.array([np.nan]))

    def test_rejects_misaligned_hourly(self):
        with pytest.raises(ValueError):
            TimeSeries(Granularity.HOURLY, np.array([BASE_EPOCH + 30]), np.array([1.0]))

    def test_daily_alignment_is_local_midnight(self):
        # BASE_EPOCH is midnight Kigali but 22:00 UTC the previous day
        series = daily_series([1.0, 2.0])
        assert_valid(series)
        assert series.local_datetimes()[0].hour == 0

    def test_negative_values_allowed(self):
        # differenced/simulated series legitimately go negative
        series = daily_series([-5.0, 3.0])
        assert series.values[0] == -5.0

    def test_immutable_arrays(self):
        series = daily_series([1.0, 2.0])
        with pytest.raises(ValueError):
            series.values[0] = 9.0


class TestResampleMean:
    def test_two_hourly_values_to_daily_mean(self):
        series = hourly_series([10.0, 20.0])
        out = resample_mean(series, Granularity.DAILY, min_coverage=0.0)
        assert len(out) == 1
        assert out.values[0] == 15.0
        assert_valid(out)

    def test_half_coverage_day_omitted(self):
        # 12 of 24 hours present: 0.5 < 0.75
        series = hourly_series([5.0] * 12)
        with pytest.raises(EmptySeriesError):
            resample_mean(series, Granularity.DAILY, min_coverage=0.75)

    def test_constant_series_invariance(self):
        series = hourly_series([7.0] * 48)
        out = resample_mean(series, Granularity.DAILY, min_coverage=1.0)
        assert len(out) == 2
        assert np.all(out.values == 7.0)

    def test_target_must_be_coarser(self):
        series = daily_series([1.0, 2.0])
        with pytest.raises(GranularityError):
            resample_mean(series, Granularity.HOURLY, min_coverage=0.5)
        with pytest.raises(GranularityError):
            resample_mean(series, Granularity.DAILY, min_coverage=0.5)

    def test_preserves_global_mean_on_complete_buckets(self, rng):
        values = rng.uniform(0, 100, 24 * 10)
        series = hourly_series(values)
        out = resample_mean(series, Granularity.DAILY, min_coverage=1.0)
        assert len(out) == 10
        assert abs(out.values.mean() - values.mean()) < 1e-12

    def test_raw_cadence_estimated_for_coverage(self):
        # daily-cadence raw data: each daily bucket expects one observation
        at = BASE_EPOCH + DAY * np.arange(5, dtype=np.int64)
        raw = TimeSeries(Granularity.RAW, at, np.arange(5.0))
        out = resample_mean(raw, Granularity.DAILY, min_coverage=0.75)
        assert len(out) == 5
        np.testing.assert_allclose(out.values, np.arange(5.0))

    def test_raw_subhourly_to_hourly(self):
        # 4 readings per hour at 15-minute cadence
        at = BASE_EPOCH + 900 * np.arange(8, dtype=np.int64)
        raw = TimeSeries(Granularity.RAW, at, np.array([1.0, 2, 3, 4, 10, 10, 10, 10]))
        out = resample_mean(raw, Granularity.HOURLY, min_coverage=1.0)
        np.testing.assert_allclose(out.values, [2.5, 10.0])


class TestDifference:
    def test_first_difference(self):
        out = difference(daily_series([1.0, 3.0, 6.0]), 1)
        np.testing.assert_array_equal(out.values, [2.0, 3.0])
        # instants attach to the later operand
        np.testing.assert_array_equal(out.at, daily_series([1.0, 3.0, 6.0]).at[1:])

    def test_d0_is_identity(self):
        series = daily_series([4.0, 2.0, 9.0])
        out = difference(series, 0)
        np.testing.assert_array_equal(out.values, series.values)
        np.testing.assert_array_equal(out.at, series.at)

    def test_second_difference_by_hand(self):
        # [1,3,6,10] -> [2,3,4] -> [1,1]
        out = difference(daily_series([1.0, 3.0, 6.0, 10.0]), 2)
        np.testing.assert_array_equal(out.values, [1.0, 1.0])

    def test_too_short(self):
        with pytest.raises(LengthError):
            difference(daily_series([1.0, 2.0]), 2)


class TestInverseDifference:
    def test_cumulative_sum(self):
        diffed = daily_series([2.0, 3.0], start=BASE_EPOCH + DAY)
        out = inverse_difference(diffed, [1.0], 1)
        np.testing.assert_array_equal(out.values, [3.0, 6.0])

    def test_d0_identity(self):
        series = daily_series([5.0, 1.0])
        out = inverse_difference(series, [], 0)
        np.testing.assert_array_equal(out.values, series.values)

    def test_seed_count_enforced(self):
        with pytest.raises(SeedError):
            inverse_difference(daily_series([1.0]), [1.0, 2.0], 1)

    @given(
        st.lists(st.floats(-100, 100), min_size=50, max_size=50),
        st.integers(min_value=0, max_value=2),
    )
    def test_round_trip_identity(self, values, d):
        series = daily_series(values)
        diffed = difference(series, d)
        restored = inverse_difference(diffed, series.values[:d], d)
        scale = np.maximum(np.abs(series.values[d:]), 1.0)
        assert np.all(np.abs(restored.values - series.values[d:]) / scale < 1e-9)
        np.testing.assert_array_equal(restored.at, series.at[d:])


class TestInterpolateGaps:
    def test_midpoint_fill(self):
        series = TimeSeries(
            Granularity.DAILY,
            np.array([BASE_EPOCH, BASE_EPOCH + 2 * DAY]),
            np.array([10.0, 20.0]),
        )
        out = interpolate_gaps(series, max_gap=1)
        np.testing.assert_array_equal(out.values, [10.0, 15.0, 20.0])
        assert_valid(out)

    def test_long_gap_untouched(self):
        series = TimeSeries(
            Granularity.DAILY,
            np.array([BASE_EPOCH, BASE_EPOCH + 4 * DAY]),
            np.array([10.0, 20.0]),
        )
        out = interpolate_gaps(series, max_gap=1)
        np.testing.assert_array_equal(out.values, series.values)

    def test_linear_formula(self):
        series = TimeSeries(
            Granularity.DAILY,
            np.array([BASE_EPOCH, BASE_EPOCH + 3 * DAY]),
            np.array([0.0, 9.0]),
        )
        out = interpolate_gaps(series, max_gap=3)
        np.testing.assert_allclose(out.values, [0.0, 3.0, 6.0, 9.0])

    def test_existing_observations_untouched(self, rng):
        values = rng.uniform(0, 50, 30)
        keep = np.sort(rng.choice(30, size=18, replace=False))
        series = TimeSeries(
            Granularity.DAILY, BASE_EPOCH + DAY * keep.astype(np.int64), values[keep]
        )
        out = interpolate_gaps(series, max_gap=2)
        restored = dict(zip(out.at.tolist(), out.values.tolist()))
        for t, v in zip(series.at.tolist(), series.values.tolist()):
            assert restored[t] == v
        # no extrapolation past either end
        assert out.at[0] == series.at[0] and out.at[-1] == series.at[-1]

    def test_requires_aligned_granularity(self):
        raw = TimeSeries(Granularity.RAW, np.array([0, 100]), np.array([1.0, 2.0]))
        with pytest.raises(GranularityError):
            interpolate_gaps(raw, max_gap=2)


class TestSplitHoldout:
    def test_fraction(self):
        train, test = split_holdout(daily_series(np.arange(100.0)), SplitSpec(fraction=0.2))
        assert len(train) == 80 and len(test) == 20
        np.testing.assert_array_equal(
            np.concatenate([train.values, test.values]), np.arange(100.0)
        )

    def test_count(self):
        train, test = split_holdout(daily_series(np.arange(10.0)), SplitSpec(count=1))
        assert len(train) == 9 and len(test) == 1

    def test_train_floor(self):
        with pytest.raises(SplitError):
            split_holdout(daily_series(np.arange(10.0)), SplitSpec(fraction=0.95))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SplitSpec(fraction=0.2, count=3)
        with pytest.raises(ValueError):
            SplitSpec()
        with pytest.raises(ValueError):
            SplitSpec(fraction=1.5)
