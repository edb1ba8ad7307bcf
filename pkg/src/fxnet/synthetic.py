"""Synthetic FX panels with planted correlation clusters (for tests and demos)."""
from __future__ import annotations

from datetime import date, timedelta

import numpy as np

from .ingestion import RatePanel

CODES = (
    "USD", "EUR", "JPY", "GBP", "CHF", "AUD", "CAD", "NZD", "SEK", "NOK", "DKK",
    "ISK", "CZK", "PLN", "HUF", "SKK", "RUB", "TRY", "ILS", "MAD", "TND", "ZAR",
    "GHS", "XAU", "MXN", "BRL", "ARS", "CLP", "COP", "PEN", "CNY", "HKD", "INR",
    "IDR", "KRW", "MYR", "PHP", "SGD", "THB", "TWD", "KWD",
)


def business_days(start: date, n: int) -> list:
    out = []
    d = start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out


def factor_returns(n_series: int, n_obs: int, clusters=((), ()), intra=0.8, inter=0.1, scale=0.006,
                   rng=None) -> np.ndarray:
    """Gaussian one-global-plus-cluster-factor returns, shape (n_obs, n_series).

    Every pair has correlation ``inter``; pairs inside one of ``clusters``
    (sequences of column indices) have ``intra``.
    """
    if not 0 <= inter <= intra < 1:
        raise ValueError("need 0 <= inter <= intra < 1")
    rng = np.random.default_rng(rng)
    glob = rng.standard_normal(n_obs)
    out = np.sqrt(inter) * glob[:, None] + np.sqrt(1 - inter) * rng.standard_normal((n_obs, n_series))
    for members in clusters:
        members = list(members)
        if not members:
            continue
        f = rng.standard_normal(n_obs)
        idio = rng.standard_normal((n_obs, len(members)))
        out[:, members] = (np.sqrt(inter) * glob[:, None] + np.sqrt(intra - inter) * f[:, None]
                           + np.sqrt(1 - intra) * idio)
    return scale * out


def synthetic_panel(n_currencies=40, n_dates=2519, clusters=(range(0, 8), range(8, 16)), intra=0.8,
                    inter=0.1, seed=0, reference="USD", start=date(1999, 1, 4), scale=0.006) -> RatePanel:
    """Reference-quoted rate panel whose log-returns follow :func:`factor_returns`.

    Cluster indices refer to the non-reference columns.
    """
    codes = [c for c in CODES if c != reference][:n_currencies]
    if len(codes) < n_currencies:
        raise ValueError(f"at most {len(CODES) - 1} currencies available")
    rng = np.random.default_rng(seed)
    g = factor_returns(n_currencies, n_dates - 1, clusters, intra, inter, scale, rng)
    level = rng.uniform(0.5, 150.0, n_currencies)
    log_rates = np.vstack([np.zeros(n_currencies), np.cumsum(g, axis=0)]) + np.log(level)
    return RatePanel(dates=business_days(start, n_dates), currencies=codes, rates=np.exp(log_rates),
                     reference=reference)
