"""AR/MA/ARIMA modeling: simulation, conditional-sum-of-squares fitting,
order selection by AIC, and mean forecasting.

Model form (identifiable single-intercept parameterization):

    Y_t = alpha + sum_i beta_i * Y_{t-i} + W_t + sum_j theta_j * W_{t-j}

with innovations W_t ~ N(0, sigma2), applied after d rounds of
first-differencing. Estimation minimizes the conditional sum of squared
one-step residuals with pre-sample residuals set to zero, using Nelder-Mead
restarted from (i) all zeros and (ii) OLS-based AR starting values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from .errors import (
    NoConvergedModelError,
    NonStationaryError,
    OptimizerFailure,
    TooShortError,
)
from .series import (
    Granularity,
    TimeSeries,
    difference_values,
    inverse_difference_values,
)

#: 2021-01-01 00:00 Kigali time; base instant for synthetic daily series.
SYNTHETIC_BASE_EPOCH = 1_609_452_000

_BURN_IN = 200
_MAX_ITER = 2000
_SIMPLEX_TOL = 1e-8


@dataclass(frozen=True)
class ArimaOrder:
    p: int
    d: int
    q: int

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 10:
            raise ValueError("p must be in 0..10")
        if not 0 <= self.d <= 2:
            raise ValueError("d must be in 0..2")
        if not 0 <= self.q <= 10:
            raise ValueError("q must be in 0..10")


@dataclass(frozen=True)
class ArimaModel:
    order: ArimaOrder
    alpha: float
    beta: tuple[float, ...]
    theta: tuple[float, ...]
    sigma2: float
    css: float
    n_effective: int
    converged: bool
    ar_stationary: bool
    ma_invertible: bool

    def to_dict(self) -> dict:
        return {
            "order": {"p": self.order.p, "d": self.order.d, "q": self.order.q},
            "alpha": self.alpha,
            "beta": list(self.beta),
            "theta": list(self.theta),
            "sigma2": self.sigma2,
            "css": self.css,
            "n_effective": self.n_effective,
            "converged": self.converged,
            "ar_stationary": self.ar_stationary,
            "ma_invertible": self.ma_invertible,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArimaModel":
        return cls(
            order=ArimaOrder(**data["order"]),
            alpha=data["alpha"],
            beta=tuple(data["beta"]),
            theta=tuple(data["theta"]),
            sigma2=data["sigma2"],
            css=data["css"],
            n_effective=data["n_effective"],
            converged=data["converged"],
            ar_stationary=data["ar_stationary"],
            ma_invertible=data["ma_invertible"],
        )


def _poly_roots_outside_unit_circle(ascending: Sequence[float]) -> bool:
    """True when every root of the polynomial (ascending coeffs) lies strictly
    outside the unit circle. Degree-0 polynomials pass vacuously."""
    coeffs = np.asarray(ascending, dtype=np.float64)
    while coeffs.size > 1 and coeffs[-1] == 0.0:
        coeffs = coeffs[:-1]
    if coeffs.size <= 1:
        return True
    roots = np.polynomial.polynomial.polyroots(coeffs)
    return bool(np.all(np.abs(roots) > 1.0))


def ar_is_stationary(beta: Sequence[float]) -> bool:
    """Stationarity of 1 - beta_1 x - ... - beta_p x^p."""
    return _poly_roots_outside_unit_circle([1.0, *(-b for b in beta)])


def ma_is_invertible(theta: Sequence[float]) -> bool:
    """Invertibility of 1 + theta_1 x + ... + theta_q x^q."""
    return _poly_roots_outside_unit_circle([1.0, *theta])


def _ma_strictly_noninvertible(theta: np.ndarray, tol: float = 1e-9) -> bool:
    """True when an MA root lies strictly inside the unit circle.

    Roots on (or within ``tol`` of) the circle are tolerated: those are
    legitimate boundary optima (e.g. over-differenced data) and stay flagged
    through ``ma_invertible`` instead of being pushed away.
    """
    if np.sum(np.abs(theta)) < 1.0:  # sufficient for all roots outside
        return False
    roots = _roots_ascending(np.concatenate([[1.0], theta]))
    if roots.size == 0:
        return False
    return bool(np.any(np.abs(roots) < 1.0 - tol))


def _roots_ascending(ascending: np.ndarray) -> np.ndarray:
    """Roots of a polynomial given ascending coefficients with constant 1.

    Hot path inside the CSS objective: degrees 1-2 use closed forms, higher
    degrees one companion-matrix eigendecomposition.
    """
    coeffs = ascending
    deg = coeffs.size - 1
    while deg > 0 and coeffs[deg] == 0.0:
        deg -= 1
    if deg == 0:
        return np.empty(0)
    if deg == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    if deg == 2:
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        disc = np.emath.sqrt(b * b - 4.0 * a * c)
        return np.array([(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)])
    companion = np.zeros((deg, deg))
    companion[0, :] = -coeffs[deg - 1 :: -1] / coeffs[deg]
    companion[1:, :-1] = np.eye(deg - 1)
    return np.linalg.eigvals(companion)


_REDUNDANCY_TOL = 0.2


def _arma_redundant(beta: np.ndarray, theta: np.ndarray) -> bool:
    """True when an AR root nearly coincides with an MA root.

    Near-common factors make the parameterization redundant: the pair
    contributes nothing to the transfer function but lets the in-sample
    residual filter chase periodogram dips, deflating the CSS spuriously.
    Distances are relative to the root magnitude (floored at 1).
    """
    # redundancy only bites when both sides carry sizable coefficients
    if np.sum(np.abs(beta)) < 0.3 or np.sum(np.abs(theta)) < 0.3:
        return False
    ar_roots = _roots_ascending(np.concatenate([[1.0], -beta]))
    ma_roots = _roots_ascending(np.concatenate([[1.0], theta]))
    if ar_roots.size == 0 or ma_roots.size == 0:
        return False
    dist = np.abs(ar_roots[:, None] - ma_roots[None, :])
    scale = np.maximum(1.0, np.abs(ma_roots))[None, :]
    return bool(np.any(dist / scale < _REDUNDANCY_TOL))


def simulate_arma(
    alpha: float,
    beta: Sequence[float],
    theta: Sequence[float],
    sigma: float,
    n: int,
    seed: int,
) -> TimeSeries:
    """Generate n observations of the ARMA recursion on synthetic daily instants.

    Deterministic given the seed; a 200-step burn-in from zero initial
    conditions is discarded.
    """
    beta = tuple(float(b) for b in beta)
    theta = tuple(float(t) for t in theta)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if n <= len(beta) + len(theta):
        raise ValueError("n must exceed p + q")
    if not ar_is_stationary(beta):
        raise NonStationaryError(f"AR coefficients {beta} have a root on/inside the unit circle")

    rng = np.random.default_rng(seed)
    w = sigma * rng.standard_normal(_BURN_IN + n)
    x = alpha + lfilter([1.0, *theta], [1.0], w)
    y = lfilter([1.0], [1.0, *(-b for b in beta)], x)[_BURN_IN:]
    at = SYNTHETIC_BASE_EPOCH + 86400 * np.arange(n, dtype=np.int64)
    return TimeSeries(Granularity.DAILY, at, y)


def ma_unconditional_moments(
    mu: float, theta: Sequence[float], sigma: float
) -> tuple[float, float]:
    """Long-run mean and variance of an MA(q): (mu, sigma^2 * (1 + sum theta_j^2))."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    return float(mu), float(sigma**2 * (1.0 + np.sum(theta**2)))


def css_residuals(
    z: np.ndarray, alpha: float, beta: Sequence[float], theta: Sequence[float]
) -> np.ndarray:
    """One-step residuals on the (already differenced) series, conditional on
    zero pre-sample residuals; defined for t = p .. len(z)-1."""
    z = np.asarray(z, dtype=np.float64)
    p = len(beta)
    n = z.size
    u = z[p:] - alpha
    for i, b in enumerate(beta, start=1):
        u = u - b * z[p - i : n - i]
    if len(theta) == 0:
        return u
    return lfilter([1.0], [1.0, *theta], u)


def _ols_start(z: np.ndarray, p: int, q: int) -> np.ndarray:
    """OLS fit of z_t on an intercept and its last p values; MA terms start at zero."""
    if p == 0:
        return np.array([float(np.mean(z))] + [0.0] * q)
    rows = z.size - p
    design = np.ones((rows, p + 1))
    for i in range(1, p + 1):
        design[:, i] = z[p - i : z.size - i]
    coef, *_ = np.linalg.lstsq(design, z[p:], rcond=None)
    return np.concatenate([coef, np.zeros(q)])


def fit_arima(series: TimeSeries, order: ArimaOrder) -> ArimaModel:
    """Fit by minimizing the conditional sum of squares after differencing.

    The search rejects parameter points whose MA polynomial has a root
    strictly inside the unit circle and points with near-common AR/MA roots
    (parameter redundancy); both regions deflate the CSS without predictive
    content and would otherwise corrupt AIC comparisons. Boundary roots stay
    reachable and are reported through the stationarity/invertibility flags.

    Non-convergence within the iteration budget is surfaced on the
    ``converged`` flag; a non-finite optimum raises OptimizerFailure.
    sigma2 is floored at the smallest positive float so it stays > 0 even on
    an exactly-reproduced series.
    """
    p, d, q = order.p, order.d, order.q
    if len(series) <= d:
        raise TooShortError(f"series length {len(series)} does not support d={d}")
    z = difference_values(series.values, d)
    n = z.size
    n_effective = n - p
    if n < p + q + 2:
        raise TooShortError(
            f"need at least {p + q + 2} observations after differencing, got {n}"
        )

    # lag matrix precomputed once; the objective then costs one matmul + one filter
    lag_matrix = np.empty((n - p, p))
    for i in range(1, p + 1):
        lag_matrix[:, i - 1] = z[p - i : n - i]
    z_head = z[p:]

    def objective(params: np.ndarray) -> float:
        if not np.all(np.isfinite(params)):
            return np.inf
        # Two guards against spurious CSS deflation: MA roots strictly inside
        # the unit circle, and near-cancelling AR/MA root pairs. Both regions
        # shrink residuals without predictive content.
        if q and _ma_strictly_noninvertible(params[1 + p :]):
            return np.inf
        if p and q and _arma_redundant(params[1 : 1 + p], params[1 + p :]):
            return np.inf
        with np.errstate(over="ignore", invalid="ignore"):
            u = z_head - params[0]
            if p:
                u = u - lag_matrix @ params[1 : 1 + p]
            e = u if q == 0 else lfilter([1.0], [1.0, *params[1 + p :]], u)
            css = float(np.dot(e, e))
        return css if np.isfinite(css) else np.inf

    starts = [np.zeros(1 + p + q), _ols_start(z, p, q)]
    best = None
    for x0 in starts:
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": _MAX_ITER,
                "maxfev": 2 * _MAX_ITER,
                "xatol": _SIMPLEX_TOL,
                "fatol": _SIMPLEX_TOL,
            },
        )
        if best is None or result.fun < best.fun:
            best = result
    assert best is not None
    if not np.isfinite(best.fun) or not np.all(np.isfinite(best.x)):
        raise OptimizerFailure(f"no finite optimum for order {order}")

    params = best.x
    beta = tuple(float(b) for b in params[1 : 1 + p])
    theta = tuple(float(t) for t in params[1 + p :])
    css = float(best.fun)
    sigma2 = max(css / n_effective, float(np.finfo(np.float64).tiny))
    return ArimaModel(
        order=order,
        alpha=float(params[0]),
        beta=beta,
        theta=theta,
        sigma2=sigma2,
        css=css,
        n_effective=n_effective,
        converged=bool(best.success),
        ar_stationary=ar_is_stationary(beta),
        ma_invertible=ma_is_invertible(theta),
    )


def forecast(model: ArimaModel, history: TimeSeries, horizon: int) -> np.ndarray:
    """h-step mean forecasts on the original scale.

    Future innovations enter at their zero mean; unknown future values are
    replaced by their own forecasts; results are re-integrated through the
    differencing seeds taken from the end of the history.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    p, d, q = model.order.p, model.order.d, model.order.q
    if len(history) <= p + d:
        raise TooShortError(f"history length {len(history)} must exceed p + d = {p + d}")
    if horizon == 0:
        return np.empty(0)

    z = difference_values(history.values, d)
    residuals = np.zeros(z.size)
    residuals[p:] = css_residuals(z, model.alpha, model.beta, model.theta)

    z_ext = z.tolist()
    e_ext = residuals.tolist()
    preds: list[float] = []
    for _ in range(horizon):
        t = len(z_ext)
        val = model.alpha
        for i, b in enumerate(model.beta, start=1):
            val += b * z_ext[t - i]
        for j, th in enumerate(model.theta, start=1):
            val += th * e_ext[t - j]
        z_ext.append(val)
        e_ext.append(0.0)
        preds.append(val)

    seeds = history.values[len(history) - d :] if d else ()
    return inverse_difference_values(np.asarray(preds), seeds, d)


def aic(model: ArimaModel) -> float:
    """Gaussian-CSS approximation: n_eff * ln(sigma2) + 2 * (p + q + 1)."""
    k = model.order.p + model.order.q + 1
    return float(model.n_effective * np.log(model.sigma2) + 2 * k)


def select_order(
    series: TimeSeries, p_max: int = 5, d_max: int = 1, q_max: int = 5
) -> tuple[ArimaOrder, ArimaModel]:
    """Exhaustive AIC grid search; ties prefer smaller p+q, then smaller p.

    Non-converged or failed fits are excluded; raises NoConvergedModelError
    when nothing on the grid survives.
    """
    best_key: tuple | None = None
    best: tuple[ArimaOrder, ArimaModel] | None = None
    for d in range(d_max + 1):
        for p in range(p_max + 1):
            for q in range(q_max + 1):
                order = ArimaOrder(p, d, q)
                try:
                    model = fit_arima(series, order)
                except (TooShortError, OptimizerFailure):
                    continue
                if not model.converged:
                    continue
                key = (aic(model), p + q, p, d, q)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (order, model)
    if best is None:
        raise NoConvergedModelError("every grid cell failed to produce a converged fit")
    return best
