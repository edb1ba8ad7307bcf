from datetime import date

import numpy as np
import pytest

from fxnet.errors import DegenerateInputError, FxNetError, InsufficientDataError
from fxnet.ingestion import rebase
from fxnet.metrics import topology_report
from fxnet.netcore import network
from fxnet.rolling import MetricSeries, WindowSpec, linear_trend, rolling_metrics
from fxnet.signals import prepare_signals, select_signal
from fxnet.synthetic import synthetic_panel


@pytest.fixture(scope="module")
def bundle():
    panel = synthetic_panel(n_currencies=12, n_dates=301, clusters=(range(0, 4), range(4, 8)), seed=3)
    return prepare_signals(rebase(panel, "EUR"))


def fresh(bundle, kind, start, stop, mode="weighted"):
    b = bundle.window(start, stop)
    _, _, w, tree = network(select_signal(b, kind), b.currencies)
    r = topology_report(tree, w, mode)
    return r.L, r.C


def test_window_spec():
    assert WindowSpec().width == 120 and WindowSpec().step == 1
    assert WindowSpec(120, 1).count(2518) == 2399 == len(WindowSpec(120, 1).starts(2518))
    assert WindowSpec(120, 120).count(2518) == 20 == 2518 // 120
    with pytest.raises(FxNetError):
        WindowSpec(2)
    with pytest.raises(FxNetError):
        WindowSpec(10, 0)
    with pytest.raises(InsufficientDataError):
        WindowSpec(50).starts(49)


@pytest.mark.parametrize("kind", ["return", "sign", "amplitude"])
def test_rolling_matches_fresh_runs(bundle, kind):
    spec = WindowSpec(60, 1)
    L, C = rolling_metrics(bundle, kind, spec)
    n = len(bundle.dates)
    assert len(L.points) == len(C.points) == n - 60 + 1
    for j in (0, 17, n - 60):
        fl, fc = fresh(bundle, kind, j, j + 60)
        assert L.points[j][1] == fl and C.points[j][1] == fc
        assert L.points[j][0] == bundle.dates[j + 59]


def test_hop_mode(bundle):
    (L,) = rolling_metrics(bundle, "sign", WindowSpec(100, 7), metrics=["L"], mode="hop")
    assert L.metric == "L"
    assert L.points[3][1] == fresh(bundle, "sign", 21, 121, "hop")[0]


def test_non_overlapping_blocks(bundle):
    spec = WindowSpec(50, 50)
    L, C = rolling_metrics(bundle, "return", spec)
    assert len(L.points) == len(bundle.dates) // 50
    for k, ((_, lv), (_, cv)) in enumerate(zip(L.points, C.points)):
        assert (lv, cv) == fresh(bundle, "return", 50 * k, 50 * k + 50)


def test_dates_increase(bundle):
    (C,) = rolling_metrics(bundle, "amplitude", WindowSpec(40, 3), metrics=["C"])
    assert all(a < b for a, b in zip(C.dates, C.dates[1:]))
    assert C.offsets == tuple(range(39, len(bundle.dates), 3))[:len(C.points)]


def test_stationary_series_hovers_around_full_sample(bundle):
    L, C = rolling_metrics(bundle, "return", WindowSpec(150, 10))
    full_L, full_C = fresh(bundle, "return", 0, len(bundle.dates))
    assert abs(np.median(C.values) - full_C) < 0.1
    assert abs(np.median(L.values) - full_L) < 0.5


def test_width_too_large(bundle):
    with pytest.raises(InsufficientDataError):
        rolling_metrics(bundle, "sign", WindowSpec(len(bundle.dates) + 1))


def series(values, offsets=None):
    offsets = tuple(range(len(values))) if offsets is None else tuple(offsets)
    dates = [date.fromordinal(730000 + o) for o in offsets]
    return MetricSeries(base="EUR", kind="return", metric="L", window=WindowSpec(),
                        points=tuple(zip(dates, values)), offsets=offsets)


def test_trend_exact_line():
    fit = linear_trend(series([2.0 * t + 1 for t in range(10)]))
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(1.0, abs=1e-12)
    assert fit.residual_se == pytest.approx(0.0, abs=1e-12)


def test_trend_constant():
    assert linear_trend(series([0.4] * 7)).slope == 0.0


def test_trend_matches_normal_equations(rng):
    t = np.arange(0, 300, 3.0)
    y = 0.01 * t - 2 + rng.normal(0, 0.5, t.size)
    fit = linear_trend(series(list(y), offsets=t.astype(int)))
    X = np.column_stack([np.ones_like(t), t])
    intercept, slope = np.linalg.solve(X.T @ X, X.T @ y)
    resid = y - X @ np.array([intercept, slope])
    assert fit.slope == pytest.approx(slope, abs=1e-10)
    assert fit.intercept == pytest.approx(intercept, abs=1e-10)
    assert fit.residual_se == pytest.approx(np.sqrt(resid @ resid / (t.size - 2)), abs=1e-10)


def test_trend_reversal_negates_slope(rng):
    y = list(rng.normal(size=101))
    assert linear_trend(series(y[::-1])).slope == -linear_trend(series(y)).slope


def test_trend_errors():
    with pytest.raises(InsufficientDataError):
        linear_trend(series([1.0]))
    with pytest.raises(DegenerateInputError):
        linear_trend(series([1.0, 2.0], offsets=[5, 5]))
