"""Growth-law fitting and model comparison for ensemble outputs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InsufficientData

MIN_POINTS = 5
DEFAULT_T_MIN = 100.0


class GrowthModel(str, Enum):
    LOG = "log"  # c * ln t + d
    POWER = "power"  # c * t^beta (optionally + d, see fit_power)
    LOGLOGLOG = "logloglog"  # c * ln t * ln ln t + d
    DECAY = "decay"  # c * t^-gamma


@dataclass(frozen=True)
class FitResult:
    model: GrowthModel
    params: tuple[float, ...]
    r_squared: float
    residual_rms: float

    def predict(self, t: np.ndarray) -> np.ndarray:
        return predict(self.model, self.params, t)


def predict(model: GrowthModel, params, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if model is GrowthModel.LOG:
        c, d = params
        return c * np.log(t) + d
    if model is GrowthModel.POWER:
        if len(params) == 3:
            c, beta, d = params
            return c * t**beta + d
        c, beta = params
        return c * t**beta
    if model is GrowthModel.LOGLOGLOG:
        c, d = params
        return c * np.log(t) * np.log(np.log(t)) + d
    if model is GrowthModel.DECAY:
        c, gamma = params
        return c * t**-gamma
    raise ValueError(f"unknown model {model}")


def _metrics(y: np.ndarray, pred: np.ndarray) -> tuple[float, float]:
    """(r_squared clipped to [0, 1], residual RMS) in the original y space."""
    res = y - pred
    rms = float(np.sqrt(np.mean(res**2)))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot <= 0.0:
        return (1.0 if rms == 0.0 else 0.0), rms
    r2 = 1.0 - float(np.sum(res**2)) / ss_tot
    return min(1.0, max(0.0, r2)), rms


def _masked(t, y, t_min: float, positive_y: bool):
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    m = (t >= t_min) & np.isfinite(t) & np.isfinite(y) & (t > 0)
    if positive_y:
        m &= y > 0
    if m.sum() < MIN_POINTS:
        raise InsufficientData(f"{int(m.sum())} usable points, need {MIN_POINTS}")
    return t[m], y[m]


def fit_power(t, y, t_min: float = DEFAULT_T_MIN, offset: bool = False) -> FitResult:
    """Power-law fit of a growth curve.

    offset=False (default): least squares of ln y on ln t; params (c, beta)
    for y = c * t^beta.

    offset=True: profiled least squares of y = c * t^beta + d, minimizing
    over beta with (c, d) solved linearly. The offset absorbs the additive
    lower-order terms of an integrated growth curve, whose slow decay
    otherwise dominates the log-log slope at accessible horizons; on a pure
    power law both variants recover beta exactly.
    """
    tt, yy = _masked(t, y, t_min, positive_y=not offset)
    if not offset:
        slope, intercept = np.polyfit(np.log(tt), np.log(yy), 1)
        params = (float(np.exp(intercept)), float(slope))
        r2, rms = _metrics(yy, predict(GrowthModel.POWER, params, tt))
        return FitResult(GrowthModel.POWER, params, r2, rms)

    ones = np.ones_like(tt)

    def rss(beta: float) -> tuple[float, np.ndarray]:
        x = np.column_stack([tt**beta, ones])
        coef, res, *_ = np.linalg.lstsq(x, yy, rcond=None)
        r = res[0] if len(res) else float(np.sum((x @ coef - yy) ** 2))
        return float(r), coef

    grid = np.linspace(0.002, 0.8, 160)
    vals = [rss(b)[0] for b in grid]
    i = int(np.argmin(vals))
    lo, hi = grid[max(0, i - 1)], grid[min(len(grid) - 1, i + 1)]
    for _ in range(60):
        m1 = lo + 0.381966 * (hi - lo)
        m2 = hi - 0.381966 * (hi - lo)
        if rss(m1)[0] <= rss(m2)[0]:
            hi = m2
        else:
            lo = m1
    beta = 0.5 * (lo + hi)
    _, coef = rss(beta)
    params = (float(coef[0]), float(beta), float(coef[1]))
    r2, rms = _metrics(yy, predict(GrowthModel.POWER, params, tt))
    return FitResult(GrowthModel.POWER, params, r2, rms)


def fit_log(t, y, t_min: float = DEFAULT_T_MIN) -> FitResult:
    """Least squares of y on (ln t, 1); params (c, d) for y = c ln t + d."""
    tt, yy = _masked(t, y, t_min, positive_y=False)
    x = np.column_stack([np.log(tt), np.ones_like(tt)])
    coef, *_ = np.linalg.lstsq(x, yy, rcond=None)
    params = (float(coef[0]), float(coef[1]))
    r2, rms = _metrics(yy, predict(GrowthModel.LOG, params, tt))
    return FitResult(GrowthModel.LOG, params, r2, rms)


def fit_logloglog(t, y, t_min: float = DEFAULT_T_MIN) -> FitResult:
    """Least squares of y on (ln t * ln ln t, 1); needs t > e."""
    tt, yy = _masked(t, y, max(t_min, math.e + 1e-9), positive_y=False)
    x = np.column_stack([np.log(tt) * np.log(np.log(tt)), np.ones_like(tt)])
    coef, *_ = np.linalg.lstsq(x, yy, rcond=None)
    params = (float(coef[0]), float(coef[1]))
    r2, rms = _metrics(yy, predict(GrowthModel.LOGLOGLOG, params, tt))
    return FitResult(GrowthModel.LOGLOGLOG, params, r2, rms)


def fit_decay(t, rate, t_min: float = DEFAULT_T_MIN) -> FitResult:
    """Power-law decay fit of binned acceptance rates.

    Least squares of ln rate on ln t; params (c, gamma) for
    rate = c * t^-gamma. Zero-rate bins are dropped.
    """
    tt, rr = _masked(t, rate, t_min, positive_y=True)
    slope, intercept = np.polyfit(np.log(tt), np.log(rr), 1)
    params = (float(np.exp(intercept)), float(-slope))
    r2, rms = _metrics(rr, predict(GrowthModel.DECAY, params, tt))
    return FitResult(GrowthModel.DECAY, params, r2, rms)


def binned_acceptance(
    acceptance_rate: np.ndarray,
    trials: int,
    t_min: float = DEFAULT_T_MIN,
    bins_per_decade: int = 8,
    min_opportunities: int = 100,
) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced binning of per-round acceptance rates.

    acceptance_rate[i] is the rate of round i + 1. Returns bin centres
    (geometric) and mean rates for bins with at least `min_opportunities`
    acceptance opportunities (trials x rounds in the bin). Acceptance is
    rare at large t, so raw per-round rates are too noisy to fit directly.
    """
    rate = np.asarray(acceptance_rate, dtype=float)
    t_max = len(rate)
    if t_max <= t_min:
        raise InsufficientData("curve ends before t_min")
    n_bins = max(2, int(round(bins_per_decade * math.log10(t_max / t_min))))
    edges = np.unique(
        np.round(np.logspace(math.log10(t_min), math.log10(t_max), n_bins + 1)).astype(
            int
        )
    )
    centres, rates = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        window = rate[a - 1 : b - 1]
        if window.size == 0 or trials * window.size < min_opportunities:
            continue
        centres.append(math.sqrt(a * (b - 1.0)))
        rates.append(float(window.mean()))
    if len(centres) < MIN_POINTS:
        raise InsufficientData(f"only {len(centres)} usable bins")
    return np.array(centres), np.array(rates)


_FITTERS = {
    GrowthModel.LOG: fit_log,
    GrowthModel.POWER: fit_power,
    GrowthModel.LOGLOGLOG: fit_logloglog,
    GrowthModel.DECAY: fit_decay,
}


def model_compare(
    t,
    y,
    models,
    t_min: float = DEFAULT_T_MIN,
    n_bins: int = 32,
) -> list[FitResult]:
    """Rank growth models by held-out residual RMS on log-spaced bins.

    The curve is reduced to n_bins log-spaced bin means; models are fitted
    on the odd-indexed bins and scored on the even-indexed ones (log vs
    log * lnln differ too little for in-sample RMS to discriminate).
    Returns FitResults ordered best first, metrics from the held-out bins.
    """
    models = [GrowthModel(m) for m in models]
    if len(models) < 2:
        raise InsufficientData("need at least two models to compare")
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    m = (t >= max(t_min, 1.0)) & np.isfinite(y)
    t, y = t[m], y[m]
    if t.size < 2 * MIN_POINTS:
        raise InsufficientData("too few points to bin")
    edges = np.logspace(math.log10(t.min()), math.log10(t.max() + 1.0), n_bins + 1)
    idx = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, n_bins - 1)
    centres, means = [], []
    for b in range(n_bins):
        sel = idx == b
        if not sel.any():
            continue
        centres.append(np.exp(np.mean(np.log(t[sel]))))
        means.append(float(y[sel].mean()))
    centres = np.array(centres)
    means = np.array(means)
    if len(centres) < 2 * MIN_POINTS:
        raise InsufficientData(f"only {len(centres)} non-empty bins")
    train = slice(1, None, 2)  # odd-indexed bins
    test = slice(0, None, 2)  # even-indexed bins
    results = []
    for model in models:
        fitter = _FITTERS[model]
        fitted = fitter(centres[train], means[train], t_min=0.0)
        r2, rms = _metrics(means[test], fitted.predict(centres[test]))
        results.append(FitResult(model, fitted.params, r2, rms))
    results.sort(key=lambda r: r.residual_rms)
    return results
