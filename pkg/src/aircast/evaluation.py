"""Rolling one-step evaluation and the per-station model comparison.

Protocol: each forecaster is fitted exactly once on the train split, then
asked for one-step-ahead predictions over the holdout while true values
arrive one at a time. Parameters stay frozen — only the conditioning history
grows — so every model sees the identical information set and no future value
can leak into an earlier prediction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from . import ann, arima, gp
from .errors import (
    AircastError,
    EmptyInputError,
    EvaluationError,
    LengthMismatchError,
)
from .series import SplitSpec, TimeSeries, append_observation, split_holdout

#: Comparison-table column labels per model key.
TABLE_LABELS = {"arima": "arima", "ann": "ann", "gp": "gpr"}


def _check_pair(actual: Sequence[float], predicted: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=np.float64)
    p = np.asarray(predicted, dtype=np.float64)
    if a.size != p.size:
        raise LengthMismatchError(f"actual has {a.size} values, predicted has {p.size}")
    if a.size == 0:
        raise EmptyInputError("metrics need at least one observation")
    return a, p


def rmse(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Root mean squared error over equal-length sequences."""
    a, p = _check_pair(actual, predicted)
    return float(np.sqrt(np.mean((a - p) ** 2)))


def mae(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Mean absolute error over equal-length sequences."""
    a, p = _check_pair(actual, predicted)
    return float(np.mean(np.abs(a - p)))


@runtime_checkable
class ForecastAdapter(Protocol):
    """Uniform fit-once / predict-one contract the harness drives."""

    name: str

    def fit(self, train: TimeSeries) -> None: ...

    def predict_one(self, history: TimeSeries) -> float: ...


class NaiveAdapter:
    """Persistence baseline: predicts the last observed value."""

    name = "naive"

    def fit(self, train: TimeSeries) -> None:
        pass

    def predict_one(self, history: TimeSeries) -> float:
        return float(history.values[-1])


class ArimaAdapter:
    """ARIMA with AIC order selection (or a pinned order) on the train split."""

    name = "arima"

    def __init__(
        self,
        order: arima.ArimaOrder | None = None,
        p_max: int = 5,
        d_max: int = 1,
        q_max: int = 5,
    ) -> None:
        self.order = order
        self.p_max, self.d_max, self.q_max = p_max, d_max, q_max
        self.model: arima.ArimaModel | None = None

    def fit(self, train: TimeSeries) -> None:
        if self.order is not None:
            self.model = arima.fit_arima(train, self.order)
        else:
            _, self.model = arima.select_order(train, self.p_max, self.d_max, self.q_max)

    def predict_one(self, history: TimeSeries) -> float:
        assert self.model is not None, "fit before predicting"
        return float(arima.forecast(self.model, history, 1)[0])


class AnnAdapter:
    """Window MLP trained once; predictions read the last window of history."""

    name = "ann"

    def __init__(
        self,
        window: int = 7,
        hidden: Sequence[int] = (16,),
        activation: ann.Activation = ann.Activation.TANH,
        config: ann.TrainConfig | None = None,
    ) -> None:
        self.window = window
        self.hidden = tuple(hidden)
        self.activation = activation
        self.config = config or ann.TrainConfig()
        self.net: ann.MlpForecaster | None = None

    def fit(self, train: TimeSeries) -> None:
        self.net = ann.train(train, self.window, self.hidden, self.activation, self.config)

    def predict_one(self, history: TimeSeries) -> float:
        assert self.net is not None, "fit before predicting"
        return ann.forward(self.net, history.values[-self.window :])


class GpAdapter:
    """GP with hyperparameters frozen from the train split; each prediction
    re-conditions the posterior on the full history at the next time index."""

    name = "gp"

    def __init__(
        self,
        noise_grid: Sequence[float] | None = None,
        amplitude_grid: Sequence[float] | None = None,
        length_scale_grid: Sequence[float] | None = None,
    ) -> None:
        self.grids = (noise_grid, amplitude_grid, length_scale_grid)
        self.params: gp.SeKernelParams | None = None
        self.noise_variance: float | None = None
        self._base_at: int | None = None
        self._step_seconds: int | None = None

    def fit(self, train: TimeSeries) -> None:
        from .series import estimate_step_seconds

        noise_grid, amplitude_grid, length_scale_grid = self.grids
        default_noise, default_amp, default_len = gp.default_grids(train.values)
        self.params, self.noise_variance = gp.fit_hyperparameters(
            gp.day_indices(train),
            train.values,
            tuple(noise_grid) if noise_grid is not None else default_noise,
            tuple(amplitude_grid) if amplitude_grid is not None else default_amp,
            tuple(length_scale_grid) if length_scale_grid is not None else default_len,
        )
        self._base_at = int(train.at[0])
        self._step_seconds = estimate_step_seconds(train)

    def predict_one(self, history: TimeSeries) -> float:
        assert self.params is not None and self.noise_variance is not None
        assert self._base_at is not None and self._step_seconds is not None
        x = gp.day_indices(history, base_at=self._base_at)
        model = gp.fit_gp(x, history.values, self.params, self.noise_variance)
        next_x = (history.at[-1] + self._step_seconds - self._base_at) / gp.SECONDS_PER_DAY
        means, _ = gp.posterior(model, [next_x])
        return float(means[0])


@dataclass(frozen=True)
class ModelEval:
    rmse: float
    mae: float
    predictions: np.ndarray
    actuals: np.ndarray

    def to_dict(self) -> dict:
        return {
            "rmse": self.rmse,
            "mae": self.mae,
            "predictions": self.predictions.tolist(),
            "actuals": self.actuals.tolist(),
        }


@dataclass
class EvalReport:
    station: str
    split: str
    models: dict[str, ModelEval] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "station": self.station,
            "split": self.split,
            "models": {name: ev.to_dict() for name, ev in self.models.items()},
            "errors": dict(self.errors),
        }


def rolling_one_step(
    adapter: ForecastAdapter, train: TimeSeries, test: TimeSeries
) -> tuple[np.ndarray, np.ndarray]:
    """One-step predictions over the holdout, feeding true values as they arrive.

    The adapter must already be fitted on ``train``; its parameters are not
    touched here. Prediction i sees train plus test[0..i) only.
    """
    history = train
    predictions = np.empty(len(test))
    for i in range(len(test)):
        try:
            predictions[i] = adapter.predict_one(history)
        except AircastError as exc:
            raise EvaluationError(
                f"model {adapter.name!r} failed at test index {i}: {exc}"
            ) from exc
        history = append_observation(history, int(test.at[i]), float(test.values[i]))
    return predictions, test.values.copy()


def compare_models(
    series: TimeSeries,
    spec: SplitSpec,
    adapters: Sequence[ForecastAdapter],
    station: str = "",
) -> EvalReport:
    """Fit and evaluate every adapter on the identical split.

    Per-model failures are recorded in the report instead of aborting the
    other models.
    """
    if not adapters:
        raise ValueError("model set must be non-empty")
    train, test = split_holdout(series, spec)
    report = EvalReport(station=station, split=spec.describe())
    for adapter in adapters:
        try:
            adapter.fit(train)
            predictions, actuals = rolling_one_step(adapter, train, test)
            report.models[adapter.name] = ModelEval(
                rmse=rmse(actuals, predictions),
                mae=mae(actuals, predictions),
                predictions=predictions,
                actuals=actuals,
            )
        except AircastError as exc:
            report.errors[adapter.name] = str(exc)
    return report


def comparison_table(
    reports: Sequence[EvalReport], model_names: Sequence[str]
) -> tuple[list[str], list[list]]:
    """Stations-by-metrics table: RMSE columns for every model, then MAE."""
    labels = [TABLE_LABELS.get(name, name) for name in model_names]
    header = (
        ["station"]
        + [f"rmse_{label}" for label in labels]
        + [f"mae_{label}" for label in labels]
    )
    rows = []
    for report in reports:
        row: list = [report.station]
        for metric in ("rmse", "mae"):
            for name in model_names:
                ev = report.models.get(name)
                row.append(getattr(ev, metric) if ev is not None else "")
        rows.append(row)
    return header, rows
