"""Gaussian-process regression over time indices with a squared-exponential
kernel.

Kernel convention used throughout: k(x, x') = amplitude * exp(-(x-x')^2 / l^2)
— the amplitude multiplies unsquared and the exponent carries no 1/2 factor,
so k(x, x) equals the amplitude exactly. Observation noise enters the Gram
matrix as noise_variance * I. Posteriors and the log marginal likelihood are
computed through a cached Cholesky factorization with bounded jitter
escalation; the kernel matrix is never inverted explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import cho_solve, cholesky

from .errors import FactorizationError, NoValidFitError, TooShortError
from .series import TimeSeries, estimate_step_seconds

_MAX_TRAIN = 2000
_JITTER_START = 1e-10
_JITTER_CAP = 1e-4

#: Grid defaults for hyperparameter search (variance factors and day units).
DEFAULT_AMPLITUDE_FACTORS = (0.5, 1.0, 2.0)
DEFAULT_LENGTH_SCALES = (3.0, 7.0, 14.0, 30.0, 60.0)
DEFAULT_NOISE_FACTORS = (0.05, 0.1, 0.25, 0.5)

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class SeKernelParams:
    amplitude: float
    length_scale: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.amplitude) and self.amplitude > 0):
            raise ValueError("amplitude must be finite and positive")
        if not (np.isfinite(self.length_scale) and self.length_scale > 0):
            raise ValueError("length_scale must be finite and positive")


def se_kernel(x: float, x2: float, params: SeKernelParams) -> float:
    diff = x - x2
    return float(params.amplitude * np.exp(-(diff * diff) / params.length_scale**2))


def gram_matrix(xs: Sequence[float], params: SeKernelParams) -> np.ndarray:
    """Pairwise kernel matrix; exactly symmetric with ``amplitude`` on the diagonal."""
    arr = np.asarray(xs, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("xs must be non-empty")
    diff = arr[:, None] - arr[None, :]
    return params.amplitude * np.exp(-(diff * diff) / params.length_scale**2)


def _cross_kernel(
    train: np.ndarray, test: np.ndarray, params: SeKernelParams
) -> np.ndarray:
    diff = train[:, None] - test[None, :]
    return params.amplitude * np.exp(-(diff * diff) / params.length_scale**2)


@dataclass(frozen=True)
class GpModel:
    """Fitted model: hyperparameters plus the factorized regularized Gram matrix."""

    params: SeKernelParams
    noise_variance: float
    train_inputs: np.ndarray = field(repr=False)
    train_targets: np.ndarray = field(repr=False)  # centered
    offset: float
    chol_lower: np.ndarray = field(repr=False)
    jitter: float
    _alpha: np.ndarray = field(repr=False)  # (K + noise I + jitter I)^{-1} y

    def __len__(self) -> int:
        return int(self.train_inputs.size)

    def to_summary_dict(self) -> dict:
        return {
            "amplitude": self.params.amplitude,
            "length_scale": self.params.length_scale,
            "noise_variance": self.noise_variance,
            "n_train": len(self),
            "offset": self.offset,
            "jitter": self.jitter,
            "log_marginal_likelihood": log_marginal_likelihood(self),
        }


def fit_gp(
    times: Sequence[float],
    values: Sequence[float],
    params: SeKernelParams,
    noise_variance: float,
) -> GpModel:
    """Center targets, regularize, and factorize K + noise·I (+ jitter·I).

    Jitter starts at 1e-10·amplitude and escalates tenfold up to
    1e-4·amplitude before giving up with FactorizationError.
    """
    x = np.asarray(times, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if x.size != y.size:
        raise ValueError("times and values must have equal length")
    if x.size == 0:
        raise ValueError("need at least one training point")
    if x.size > _MAX_TRAIN:
        raise ValueError(f"exact GP is capped at {_MAX_TRAIN} training points")
    if np.unique(x).size != x.size:
        raise ValueError("training times must be distinct")
    if noise_variance < 0:
        raise ValueError("noise_variance must be non-negative")

    offset = float(np.mean(y))
    centered = y - offset
    base = gram_matrix(x, params) + noise_variance * np.eye(x.size)
    jitter = _JITTER_START * params.amplitude
    cap = _JITTER_CAP * params.amplitude
    lower = None
    while True:
        try:
            lower = cholesky(base + jitter * np.eye(x.size), lower=True)
            break
        except np.linalg.LinAlgError:
            pass
        if jitter >= cap:
            raise FactorizationError(
                f"kernel matrix not positive definite up to jitter {jitter:g}"
            )
        jitter *= 10.0
    alpha = cho_solve((lower, True), centered)
    return GpModel(
        params=params,
        noise_variance=noise_variance,
        train_inputs=x,
        train_targets=centered,
        offset=offset,
        chol_lower=lower,
        jitter=jitter,
        _alpha=alpha,
    )


def posterior(
    model: GpModel, test_times: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Posterior means (offset restored) and variances at the query times.

    Variances are the predictive diagonal of the latent function, clamped at
    zero against roundoff.
    """
    t = np.asarray(test_times, dtype=np.float64)
    if t.size == 0:
        return np.empty(0), np.empty(0)
    k_star = _cross_kernel(model.train_inputs, t, model.params)
    means = k_star.T @ model._alpha + model.offset
    v = cho_solve((model.chol_lower, True), k_star)
    variances = model.params.amplitude - np.einsum("ij,ij->j", k_star, v)
    return means, np.maximum(variances, 0.0)


def log_marginal_likelihood(model: GpModel) -> float:
    """Gaussian evidence of the centered targets under the factorized matrix."""
    n = len(model)
    quad = float(model.train_targets @ model._alpha)
    logdet_half = float(np.sum(np.log(np.diag(model.chol_lower))))
    return -0.5 * quad - logdet_half - 0.5 * n * np.log(2.0 * np.pi)


def fit_hyperparameters(
    times: Sequence[float],
    values: Sequence[float],
    noise_grid: Sequence[float],
    amplitude_grid: Sequence[float],
    length_scale_grid: Sequence[float],
) -> tuple[SeKernelParams, float]:
    """Exhaustive grid search maximizing the log marginal likelihood.

    Ties prefer the larger length scale (smoother fit), then the smaller
    amplitude. Cells whose factorization fails are skipped; if all fail,
    NoValidFitError is raised.
    """
    for name, grid in (
        ("noise_grid", noise_grid),
        ("amplitude_grid", amplitude_grid),
        ("length_scale_grid", length_scale_grid),
    ):
        if len(grid) == 0 or any(g <= 0 for g in grid):
            raise ValueError(f"{name} must be non-empty with positive entries")

    best: tuple[float, float, float, float] | None = None  # lml, l, amp, noise
    for amplitude in amplitude_grid:
        for length_scale in length_scale_grid:
            params = SeKernelParams(float(amplitude), float(length_scale))
            for noise in noise_grid:
                try:
                    model = fit_gp(times, values, params, float(noise))
                except FactorizationError:
                    continue
                lml = log_marginal_likelihood(model)
                candidate = (lml, params.length_scale, params.amplitude, float(noise))
                if best is None:
                    best = candidate
                    continue
                better = candidate[0] > best[0] or (
                    candidate[0] == best[0]
                    and (
                        candidate[1] > best[1]
                        or (candidate[1] == best[1] and candidate[2] < best[2])
                    )
                )
                if better:
                    best = candidate
    if best is None:
        raise NoValidFitError("every hyperparameter grid cell failed factorization")
    return SeKernelParams(best[2], best[1]), best[3]


def default_grids(
    values: Sequence[float],
) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
    """(noise, amplitude, length-scale) grids scaled to the target variance."""
    base = float(np.var(np.asarray(values, dtype=np.float64)))
    if base <= 0:
        base = 1.0
    noise = tuple(f * base for f in DEFAULT_NOISE_FACTORS)
    amplitude = tuple(f * base for f in DEFAULT_AMPLITUDE_FACTORS)
    return noise, amplitude, DEFAULT_LENGTH_SCALES


def day_indices(series: TimeSeries, base_at: int | None = None) -> np.ndarray:
    """Observation instants as (possibly fractional) day offsets from a base."""
    base = series.at[0] if base_at is None else base_at
    return (series.at - base) / SECONDS_PER_DAY


@dataclass(frozen=True)
class GpForecast:
    means: np.ndarray
    variances: np.ndarray
    model: GpModel


def forecast_series(
    series: TimeSeries,
    horizon: int,
    noise_grid: Sequence[float] | None = None,
    amplitude_grid: Sequence[float] | None = None,
    length_scale_grid: Sequence[float] | None = None,
) -> GpForecast:
    """Fit hyperparameters on the series and predict the next ``horizon`` steps.

    Instants are encoded as day offsets from the first observation; the next
    steps continue at the series' own cadence.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if len(series) < 10:
        raise TooShortError("need at least 10 observations to fit the GP")
    default_noise, default_amp, default_len = default_grids(series.values)
    noise_grid = tuple(noise_grid) if noise_grid is not None else default_noise
    amplitude_grid = tuple(amplitude_grid) if amplitude_grid is not None else default_amp
    length_scale_grid = (
        tuple(length_scale_grid) if length_scale_grid is not None else default_len
    )

    x = day_indices(series)
    params, noise = fit_hyperparameters(
        x, series.values, noise_grid, amplitude_grid, length_scale_grid
    )
    model = fit_gp(x, series.values, params, noise)
    step_days = estimate_step_seconds(series) / SECONDS_PER_DAY
    query = x[-1] + step_days * np.arange(1, horizon + 1)
    means, variances = posterior(model, query)
    return GpForecast(means=means, variances=variances, model=model)
