"""Sliding-window topology series and their linear trends."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DegenerateInputError, FxNetError, InsufficientDataError
from .metrics import PathLengthMode, characteristic_path_length, weighted_clustering
from .netcore import network
from .signals import SignalBundle, SignalKind, select_signal

METRICS = ("L", "C")


@dataclass(frozen=True)
class WindowSpec:
    width: int = 120
    step: int = 1

    def __post_init__(self):
        if self.width < 3:
            raise FxNetError("window width must be at least 3")
        if self.step < 1:
            raise FxNetError("window step must be at least 1")

    def starts(self, length: int) -> range:
        if self.width > length:
            raise InsufficientDataError(f"window width {self.width} exceeds series length {length}")
        return range(0, length - self.width + 1, self.step)

    def count(self, length: int) -> int:
        return (length - self.width) // self.step + 1


@dataclass(frozen=True)
class MetricSeries:
    base: Optional[str]
    kind: str
    metric: str
    window: WindowSpec
    points: tuple  # (window-end date, value)
    offsets: tuple  # trading-day index of each window end

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points])

    @property
    def dates(self) -> tuple:
        return tuple(d for d, _ in self.points)


@dataclass(frozen=True)
class TrendFit:
    slope: float
    intercept: float
    residual_se: float
    start: object
    end: object
    n_points: int


def window_metrics(data: np.ndarray, labels, metrics=METRICS, mode=PathLengthMode.WEIGHTED,
                   base=None, kind=None) -> dict:
    """Requested metrics for one block of rows; the unit every window runs."""
    _, _, weights, tree = network(data, labels, base=base, kind=kind)
    out = {}
    if "L" in metrics:
        out["L"] = characteristic_path_length(tree, mode)
    if "C" in metrics:
        out["C"] = weighted_clustering(weights)
    return out


def rolling_metrics(bundle: SignalBundle, kind, spec: WindowSpec = WindowSpec(),
                    metrics: Iterable[str] = METRICS, mode=PathLengthMode.WEIGHTED) -> list:
    """One :class:`MetricSeries` per requested metric, stamped at window ends.

    Each window re-runs correlation -> distance/weights -> MST on its own
    rows; clipping is not redone.
    """
    kind = SignalKind.parse(kind)
    mode = PathLengthMode(mode)
    metrics = tuple(m for m in METRICS if m in set(metrics))
    if not metrics:
        raise FxNetError("no metrics requested (choose from L, C)")
    data = select_signal(bundle, kind)
    starts = spec.starts(len(bundle.dates))
    values = {m: [] for m in metrics}
    for j in starts:
        res = window_metrics(data[:, j:j + spec.width], bundle.currencies, metrics, mode,
                             base=bundle.base, kind=kind)
        for m in metrics:
            values[m].append(res[m])
    offsets = tuple(j + spec.width - 1 for j in starts)
    ends = tuple(bundle.dates[o] for o in offsets)
    return [
        MetricSeries(base=bundle.base, kind=kind.value, metric=m, window=spec,
                     points=tuple(zip(ends, values[m])), offsets=offsets)
        for m in metrics
    ]


def linear_trend(series: MetricSeries) -> TrendFit:
    """OLS of value on trading-day index.

    Sums use ``math.fsum`` so the fit does not depend on point order.
    """
    x = [float(o) for o in series.offsets]
    y = [float(v) for _, v in series.points]
    n = len(y)
    if n < 2:
        raise InsufficientDataError("a trend needs at least 2 points")
    xm = math.fsum(x) / n
    ym = math.fsum(y) / n
    dx = [a - xm for a in x]
    sxx = math.fsum(a * a for a in dx)
    if sxx == 0:
        raise DegenerateInputError("all points share one date")
    sxy = math.fsum(a * (b - ym) for a, b in zip(dx, y))
    slope = sxy / sxx
    intercept = ym - slope * xm
    resid = [b - (intercept + slope * a) for a, b in zip(x, y)]
    rse = math.sqrt(math.fsum(r * r for r in resid) / (n - 2)) if n > 2 else 0.0
    dates = series.dates
    return TrendFit(slope=slope, intercept=intercept, residual_se=rse,
                    start=dates[0], end=dates[-1], n_points=n)
