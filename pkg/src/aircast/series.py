"""Canonical time-series representation and transformations.

A :class:`TimeSeries` is an immutable, strictly time-ordered sequence of
(instant, value) observations at a declared granularity. Instants are integer
epoch seconds (UTC); all hour/day bucket boundaries are taken in Kigali local
time (fixed UTC+2, no DST), so diurnal and weekday statistics line up with
local activity patterns.

All operations are pure: they validate, never mutate, and return new series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    EmptySeriesError,
    GranularityError,
    LengthError,
    SeedError,
    SplitError,
)

#: Fixed local-time offset for bucket boundaries (Kigali, UTC+2, no DST).
UTC_OFFSET_SECONDS = 7200

LOCAL_TZ = timezone(timedelta(seconds=UTC_OFFSET_SECONDS))

_MIN_TRAIN = 10


class Granularity(Enum):
    RAW = "raw"
    HOURLY = "hourly"
    DAILY = "daily"

    @property
    def step_seconds(self) -> int | None:
        """Nominal spacing between observations; None for raw sensor cadence."""
        return {"raw": None, "hourly": 3600, "daily": 86400}[self.value]

    @property
    def coarseness(self) -> int:
        return {"raw": 0, "hourly": 1, "daily": 2}[self.value]


@dataclass(frozen=True)
class Observation:
    """One timestamped measurement (µg/m³ for particulate series)."""

    at: int
    value: float


@dataclass(frozen=True)
class TimeSeries:
    """Immutable series of observations, strictly increasing in time.

    Hourly/Daily series additionally require every instant to sit on the
    corresponding local-time boundary. Values must be finite but may be
    negative: differenced or simulated series are legitimate TimeSeries even
    though raw concentrations are non-negative (ingestion enforces that).
    """

    granularity: Granularity
    at: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        at = np.asarray(self.at, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if at.ndim != 1 or values.ndim != 1:
            raise ValueError("at and values must be 1-D")
        if at.size != values.size:
            raise ValueError(f"length mismatch: {at.size} instants, {values.size} values")
        if at.size and np.any(np.diff(at) <= 0):
            raise ValueError("instants must be strictly increasing (no duplicates)")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        step = self.granularity.step_seconds
        if step is not None and at.size:
            if np.any((at + UTC_OFFSET_SECONDS) % step != 0):
                raise ValueError(
                    f"{self.granularity.value} series must be aligned to local "
                    f"{step}-second boundaries"
                )
        at.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "at", at)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.at.size)

    def observations(self) -> Iterator[Observation]:
        for t, v in zip(self.at.tolist(), self.values.tolist()):
            yield Observation(t, v)

    def local_datetimes(self) -> list[datetime]:
        return [datetime.fromtimestamp(int(t), tz=LOCAL_TZ) for t in self.at]

    def local_dates(self) -> list[date]:
        return [dt.date() for dt in self.local_datetimes()]

    @classmethod
    def from_observations(
        cls, granularity: Granularity, observations: Sequence[Observation]
    ) -> "TimeSeries":
        obs = sorted(observations, key=lambda o: o.at)
        return cls(
            granularity,
            np.array([o.at for o in obs], dtype=np.int64),
            np.array([o.value for o in obs], dtype=np.float64),
        )

    @classmethod
    def from_pairs(
        cls, granularity: Granularity, pairs: Sequence[tuple[int, float]]
    ) -> "TimeSeries":
        pairs = sorted(pairs)
        return cls(
            granularity,
            np.array([p[0] for p in pairs], dtype=np.int64),
            np.array([p[1] for p in pairs], dtype=np.float64),
        )


@dataclass(frozen=True)
class SplitSpec:
    """Trailing-holdout split: either a fraction of length or a fixed count.

    Exactly one of ``fraction`` / ``count`` is set; the resulting train
    segment must keep at least 10 observations.
    """

    fraction: float | None = None
    count: int | None = None

    def __post_init__(self) -> None:
        if (self.fraction is None) == (self.count is None):
            raise ValueError("set exactly one of fraction or count")
        if self.fraction is not None and not 0.0 < self.fraction < 1.0:
            raise ValueError("fraction must lie in (0, 1)")
        if self.count is not None and self.count < 1:
            raise ValueError("count must be >= 1")

    def test_size(self, n: int) -> int:
        if self.count is not None:
            return self.count
        return max(1, int(round(n * float(self.fraction))))

    def describe(self) -> str:
        if self.count is not None:
            return f"trailing {self.count} observations"
        return f"trailing fraction {self.fraction}"


def _bucket_starts(at: np.ndarray, step: int) -> np.ndarray:
    """Start instant (UTC epoch) of the local-time bucket containing each instant."""
    local = at + UTC_OFFSET_SECONDS
    return (local // step) * step - UTC_OFFSET_SECONDS


def estimate_step_seconds(series: TimeSeries) -> int:
    """Observation cadence: the declared step, or the median gap for raw series."""
    declared = series.granularity.step_seconds
    if declared is not None:
        return declared
    if len(series) < 2:
        return 1
    gaps = np.diff(series.at)
    return int(max(1, np.median(gaps)))


def resample_mean(
    series: TimeSeries, target: Granularity, min_coverage: float = 0.75
) -> TimeSeries:
    """Aggregate to a coarser granularity by per-bucket arithmetic mean.

    Buckets holding fewer than ``min_coverage`` of their expected observation
    count are omitted. Expected counts come from the source's declared step,
    or from the median observed cadence for raw input.
    """
    if target.coarseness <= series.granularity.coarseness:
        raise GranularityError(
            f"target {target.value} is not coarser than {series.granularity.value}"
        )
    if not 0.0 <= min_coverage <= 1.0:
        raise ValueError("min_coverage must lie in [0, 1]")
    if len(series) == 0:
        raise EmptySeriesError("cannot resample an empty series")

    step = target.step_seconds
    assert step is not None
    source_step = estimate_step_seconds(series)
    expected = max(1, int(round(step / source_step)))

    starts = _bucket_starts(series.at, step)
    uniq, inverse, counts = np.unique(starts, return_inverse=True, return_counts=True)
    sums = np.zeros(uniq.size)
    np.add.at(sums, inverse, series.values)
    means = sums / counts

    keep = counts / expected >= min_coverage if min_coverage > 0 else counts > 0
    if not np.any(keep):
        raise EmptySeriesError("no bucket met the coverage requirement")
    return TimeSeries(target, uniq[keep], means[keep])


def difference(series: TimeSeries, d: int) -> TimeSeries:
    """Apply first-differencing ``d`` times.

    Output instants attach to the later operand of each subtraction, so a
    one-step forecast of the differenced series aligns with the next
    unobserved instant.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if len(series) <= d:
        raise LengthError(f"need length > {d}, got {len(series)}")
    values = series.values
    for _ in range(d):
        values = np.diff(values)
    return TimeSeries(series.granularity, series.at[d:], values)


def difference_values(values: np.ndarray, d: int) -> np.ndarray:
    """Array form of :func:`difference` for model internals."""
    if len(values) <= d:
        raise LengthError(f"need length > {d}, got {len(values)}")
    out = np.asarray(values, dtype=np.float64)
    for _ in range(d):
        out = np.diff(out)
    return out


def inverse_difference_values(
    diffed: np.ndarray, seeds: Sequence[float], d: int
) -> np.ndarray:
    """Integrate order-``d`` differences back to the original scale.

    ``seeds`` are the d original-scale values immediately preceding the
    reconstructed segment, oldest first. Exact left inverse of
    :func:`difference_values` on the tail.
    """
    if len(seeds) != d:
        raise SeedError(f"expected {d} seeds, got {len(seeds)}")
    if d == 0:
        return np.asarray(diffed, dtype=np.float64).copy()
    # last[k] tracks the previous value of the k-th difference level
    last = [np.asarray(seeds, dtype=np.float64)]
    for _ in range(d - 1):
        last.append(np.diff(last[-1]))
    state = [lvl[-1] for lvl in last]
    out = np.empty(len(diffed))
    for i, z in enumerate(np.asarray(diffed, dtype=np.float64)):
        acc = z
        for k in range(d - 1, -1, -1):
            acc = state[k] + acc
            state[k] = acc
        out[i] = acc
    return out


def inverse_difference(diffed: TimeSeries, seeds: Sequence[float], d: int) -> TimeSeries:
    """TimeSeries form of :func:`inverse_difference_values` (keeps instants)."""
    values = inverse_difference_values(diffed.values, seeds, d)
    return TimeSeries(diffed.granularity, diffed.at, values)


def interpolate_gaps(series: TimeSeries, max_gap: int) -> TimeSeries:
    """Fill internal gaps of at most ``max_gap`` missing steps linearly.

    Longer gaps are left untouched; leading/trailing gaps are never filled and
    existing observations are never altered.
    """
    step = series.granularity.step_seconds
    if step is None:
        raise GranularityError("gap interpolation requires hourly or daily granularity")
    if max_gap < 0:
        raise ValueError("max_gap must be non-negative")
    if len(series) < 2 or max_gap == 0:
        return series

    at_out: list[int] = []
    val_out: list[float] = []
    at = series.at.tolist()
    values = series.values.tolist()
    for i in range(len(at) - 1):
        at_out.append(at[i])
        val_out.append(values[i])
        missing = (at[i + 1] - at[i]) // step - 1
        if 1 <= missing <= max_gap:
            span = at[i + 1] - at[i]
            for k in range(1, missing + 1):
                frac = (k * step) / span
                at_out.append(at[i] + k * step)
                val_out.append(values[i] + frac * (values[i + 1] - values[i]))
    at_out.append(at[-1])
    val_out.append(values[-1])
    return TimeSeries(series.granularity, np.array(at_out), np.array(val_out))


def split_holdout(series: TimeSeries, spec: SplitSpec) -> tuple[TimeSeries, TimeSeries]:
    """Split into (train, trailing test) without shuffling.

    Fraction-based splits enforce a 10-observation training floor; an
    explicit count is taken as deliberate and only requires both segments to
    be non-empty (model fitting applies its own length guards).
    """
    n = len(series)
    n_test = spec.test_size(n)
    n_train = n - n_test
    floor = _MIN_TRAIN if spec.fraction is not None else 1
    if n_test < 1 or n_train < floor:
        raise SplitError(
            f"split leaves train={n_train}, test={n_test}; need train >= "
            f"{floor} and test >= 1"
        )
    train = TimeSeries(series.granularity, series.at[:n_train], series.values[:n_train])
    test = TimeSeries(series.granularity, series.at[n_train:], series.values[n_train:])
    return train, test


def concat(head: TimeSeries, tail: TimeSeries) -> TimeSeries:
    """Concatenate two series of the same granularity (head strictly before tail)."""
    if head.granularity is not tail.granularity:
        raise GranularityError("cannot concatenate series of different granularity")
    return TimeSeries(
        head.granularity,
        np.concatenate([head.at, tail.at]),
        np.concatenate([head.values, tail.values]),
    )


def append_observation(series: TimeSeries, at: int, value: float) -> TimeSeries:
    """Return a new series with one observation appended at the end."""
    return TimeSeries(
        series.granularity,
        np.append(series.at, np.int64(at)),
        np.append(series.values, value),
    )
