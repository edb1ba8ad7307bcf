"""Log-returns, kσ winsorization and the sign/amplitude split of returns."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import FxNetError, InsufficientDataError, SchemaError
from .ingestion import CrossRatePanel


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


class SignalKind(str, Enum):
    RETURN = "return"
    SIGN = "sign"
    AMPLITUDE = "amplitude"

    @classmethod
    def parse(cls, value) -> "SignalKind":
        if isinstance(value, cls):
            return value
        aliases = {"abs": cls.AMPLITUDE, "returns": cls.RETURN, "signs": cls.SIGN}
        v = str(value).strip().lower()
        return aliases.get(v) or cls(v)

    @property
    def table_label(self) -> str:
        return "abs" if self is SignalKind.AMPLITUDE else self.value


ALL_KINDS = (SignalKind.RETURN, SignalKind.SIGN, SignalKind.AMPLITUDE)


@dataclass(frozen=True)
class ClipPolicy:
    """Winsorize at ``k`` sample standard deviations (ddof=1) of each column."""

    k: float = 10.0

    def __post_init__(self):
        if not (self.k > 0 and np.isfinite(self.k)):
            raise FxNetError(f"clip multiple must be positive, got {self.k}")


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    base: str
    dates: tuple
    currencies: tuple
    values: np.ndarray
    clip_counts: Optional[tuple] = None
    clip_sigma: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "currencies", tuple(self.currencies))
        object.__setattr__(self, "values", _frozen(self.values))
        if self.clip_sigma is not None:
            object.__setattr__(self, "clip_sigma", _frozen(self.clip_sigma))
        if self.values.shape != (len(self.dates), len(self.currencies)):
            raise SchemaError("return values shape does not match dates x currencies")
        if not np.all(np.isfinite(self.values)):
            raise SchemaError("returns must be finite")

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True, eq=False)
class SignalBundle:
    base: str
    dates: tuple
    currencies: tuple
    returns: np.ndarray
    signs: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        for name in ("returns", "signs", "amplitudes"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "currencies", tuple(self.currencies))

    def __len__(self):
        return len(self.dates)

    def window(self, start: int, stop: int) -> "SignalBundle":
        """Rows ``[start, stop)`` as a new bundle."""
        return SignalBundle(
            base=self.base,
            dates=self.dates[start:stop],
            currencies=self.currencies,
            returns=self.returns[start:stop],
            signs=self.signs[start:stop],
            amplitudes=self.amplitudes[start:stop],
        )


def log_returns(rates: CrossRatePanel) -> ReturnPanel:
    """Daily log increments; each return is stamped with the later date."""
    if len(rates.dates) < 2:
        raise InsufficientDataError("log returns need at least 2 dates")
    values = np.diff(np.log(rates.rates), axis=0)
    return ReturnPanel(base=rates.base, dates=rates.dates[1:], currencies=rates.currencies, values=values)


def clip_outliers(returns: ReturnPanel, policy: ClipPolicy = ClipPolicy(), sigma=None) -> ReturnPanel:
    """Replace values beyond ±kσ with ±kσ, column by column.

    σ is the mean-centred sample standard deviation of the input column,
    computed once.  Pass ``sigma`` to reuse σ from an earlier pass.
    Zero-variance columns are left untouched.
    """
    x = np.array(returns.values, dtype=float)
    if x.size == 0:
        raise InsufficientDataError("cannot clip an empty panel")
    if x.shape[0] < 2:
        raise InsufficientDataError("clipping needs at least 2 observations per column")
    if sigma is None:
        sigma = x.std(axis=0, ddof=1)
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (x.shape[1],):
        raise SchemaError("sigma must have one entry per column")
    limit = policy.k * sigma
    over = (np.abs(x) > limit) & (sigma > 0)
    clipped = np.where(over, np.sign(x) * limit, x)
    return ReturnPanel(
        base=returns.base,
        dates=returns.dates,
        currencies=returns.currencies,
        values=clipped,
        clip_counts=tuple(int(n) for n in over.sum(axis=0)),
        clip_sigma=sigma,
    )


def decompose(returns: ReturnPanel) -> SignalBundle:
    """Split g into s = sign(g) (sign(0) = 0) and a = |g| with s * a == g."""
    g = returns.values
    return SignalBundle(
        base=returns.base,
        dates=returns.dates,
        currencies=returns.currencies,
        returns=g,
        signs=np.sign(g),
        amplitudes=np.abs(g),
    )


def select_signal(bundle: SignalBundle, kind) -> np.ndarray:
    """Data matrix of shape (currencies, time) for the requested kind."""
    kind = SignalKind.parse(kind)
    m = {
        SignalKind.RETURN: bundle.returns,
        SignalKind.SIGN: bundle.signs,
        SignalKind.AMPLITUDE: bundle.amplitudes,
    }[kind]
    return m.T


def prepare_signals(rates: CrossRatePanel, policy: ClipPolicy = ClipPolicy()) -> SignalBundle:
    """returns -> clip -> decompose for one base."""
    return decompose(clip_outliers(log_returns(rates), policy))
