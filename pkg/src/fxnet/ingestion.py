"""Reading daily exchange-rate tables, calendar alignment and rebasing.

A :class:`RatePanel` holds rates quoted against one reference currency:
``rates[i, c]`` is the number of units of ``currencies[c]`` that buy one unit
of ``reference`` on ``dates[i]``.  Any other base is derived from it with the
triangle relation, see :func:`rebase`.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, TextIO

import numpy as np

from .errors import (
    MissingDataError,
    ParseError,
    SchemaError,
    UnknownCurrencyError,
    UnrecoverableColumnError,
)

_CODE_RE = re.compile(r"^[A-Z]{3}$")
_TIME_DIRECTIVES = ("%H", "%I", "%M", "%S", "%f", "%p", "%X", "%c", "%z", "%Z")


def _check_code(code: str) -> str:
    if not isinstance(code, str) or not _CODE_RE.match(code):
        raise SchemaError(f"invalid currency code {code!r} (expected 3 uppercase letters)")
    return code


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AlignReport:
    mode: str
    dropped_dates: int = 0
    filled_cells: int = 0


@dataclass(frozen=True, eq=False)
class RatePanel:
    """Date-indexed positive rates against ``reference``.

    Missing cells are NaN and only allowed before :func:`align_calendar`.
    """

    dates: tuple
    currencies: tuple
    rates: np.ndarray
    reference: str
    report: Optional[AlignReport] = None

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "currencies", tuple(self.currencies))
        object.__setattr__(self, "rates", _frozen(self.rates))
        _check_code(self.reference)
        for c in self.currencies:
            _check_code(c)
        if len(set(self.currencies)) != len(self.currencies):
            raise SchemaError("duplicate currency codes")
        if self.reference in self.currencies:
            raise SchemaError(f"reference {self.reference} must not be a column")
        if self.rates.shape != (len(self.dates), len(self.currencies)):
            raise SchemaError(
                f"rates shape {self.rates.shape} does not match "
                f"{len(self.dates)} dates x {len(self.currencies)} currencies"
            )
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise SchemaError("dates must be strictly increasing")
        present = self.rates[~np.isnan(self.rates)]
        if not np.all(np.isfinite(present)) or np.any(present <= 0):
            raise SchemaError("rates must be strictly positive and finite")

    @property
    def is_dense(self) -> bool:
        return not np.isnan(self.rates).any()

    @property
    def all_codes(self) -> tuple:
        """Reference followed by the quoted currencies; the admissible bases."""
        return (self.reference,) + self.currencies

    def column(self, code: str) -> np.ndarray:
        return self.rates[:, self.currencies.index(code)]

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True, eq=False)
class CrossRatePanel:
    """Rates B/X for a fixed base ``base``: units of X per one unit of B."""

    base: str
    dates: tuple
    currencies: tuple
    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "currencies", tuple(self.currencies))
        object.__setattr__(self, "rates", _frozen(self.rates))
        if self.base in self.currencies:
            raise SchemaError(f"base {self.base} cannot be one of its own columns")
        if self.rates.shape != (len(self.dates), len(self.currencies)):
            raise SchemaError("rates shape does not match dates x currencies")
        if not np.all(np.isfinite(self.rates)) or np.any(self.rates <= 0):
            raise SchemaError("cross rates must be strictly positive and finite")

    def column(self, code: str) -> np.ndarray:
        return self.rates[:, self.currencies.index(code)]


class MissingMode(str, Enum):
    DROP_DATE = "drop-date"
    FORWARD_FILL = "forward-fill"
    ERROR = "error"


@dataclass(frozen=True)
class MissingPolicy:
    mode: MissingMode = MissingMode.DROP_DATE
    max_fill_run: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", MissingMode(self.mode))
        if int(self.max_fill_run) != self.max_fill_run or self.max_fill_run < 0:
            raise SchemaError("max_fill_run must be a nonnegative integer")


@dataclass(frozen=True)
class Schema:
    """Column mapping for a delimited rate table."""

    reference: str = "USD"
    date_column: str = "date"
    date_format: str = "%Y-%m-%d"
    delimiter: str = ","
    missing_token: str = "NA"
    missing_policy: MissingPolicy = field(default_factory=MissingPolicy)

    def __post_init__(self):
        _check_code(self.reference)
        if any(d in self.date_format for d in _TIME_DIRECTIVES):
            raise SchemaError("date_format must describe calendar dates only")
        if len(self.delimiter) != 1:
            raise SchemaError("delimiter must be a single character")


_DELIMITER_NAMES = {"tab": "\t", "\\t": "\t", "comma": ",", "semicolon": ";", "space": " ", "pipe": "|"}


def load_schema(source) -> Schema:
    """Read a ``key = value`` schema file (``#`` starts a comment).

    Recognised keys: date_column, date_format, delimiter, missing_token,
    reference, missing_policy, max_fill_run.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected key = value, got {raw!r}", line=lineno)
        values[key.strip()] = value.strip()

    known = {"date_column", "date_format", "delimiter", "missing_token", "reference",
             "missing_policy", "max_fill_run"}
    unknown = set(values) - known
    if unknown:
        raise SchemaError(f"unknown schema keys: {sorted(unknown)}")
    kwargs = {k: values[k] for k in ("date_column", "date_format", "missing_token", "reference") if k in values}
    if "delimiter" in values:
        d = values["delimiter"]
        kwargs["delimiter"] = _DELIMITER_NAMES.get(d.lower(), d)
    if "missing_policy" in values or "max_fill_run" in values:
        kwargs["missing_policy"] = MissingPolicy(
            mode=values.get("missing_policy", MissingMode.DROP_DATE.value),
            max_fill_run=int(values.get("max_fill_run", 0)),
        )
    return Schema(**kwargs)


def parse_rate_panel(stream: TextIO, schema: Schema) -> RatePanel:
    """Parse a delimited table into a (possibly gappy) :class:`RatePanel`.

    Rows are sorted ascending by date; cells equal to the schema's missing
    token become NaN.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream, delimiter=schema.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, header row required", line=1) from None
    header = [h.strip() for h in header]
    if schema.date_column not in header:
        raise SchemaError(f"date column {schema.date_column!r} not in header")
    date_idx = header.index(schema.date_column)
    codes = [h for i, h in enumerate(header) if i != date_idx]
    seen = set()
    for c in codes:
        if c in seen:
            raise SchemaError(f"duplicate currency column {c}")
        seen.add(c)
        _check_code(c)
    if schema.reference in seen:
        raise SchemaError(f"reference currency {schema.reference} must not appear as a column")
    col_idx = [i for i in range(len(header)) if i != date_idx]

    rows = []
    for lineno, record in enumerate(reader, 2):
        if not record or all(not f.strip() for f in record):
            continue
        if len(record) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(record)}", line=lineno)
        raw_date = record[date_idx].strip()
        try:
            d = datetime.strptime(raw_date, schema.date_format).date()
        except ValueError:
            raise ParseError(f"malformed date {raw_date!r}", line=lineno) from None
        values = []
        for i in col_idx:
            cell = record[i].strip()
            if cell == schema.missing_token:
                values.append(np.nan)
                continue
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric rate {cell!r} for {header[i]}", line=lineno) from None
            if not np.isfinite(v) or v <= 0:
                raise ParseError(f"rate for {header[i]} must be positive and finite, got {cell!r}", line=lineno)
            values.append(v)
        rows.append((d, lineno, values))

    rows.sort(key=lambda r: r[0])
    for (d0, _, _), (d1, line1, _) in zip(rows, rows[1:]):
        if d0 == d1:
            raise ParseError(f"duplicate date {d1.isoformat()}", line=line1)
    rates = np.array([r[2] for r in rows], dtype=float).reshape(len(rows), len(codes))
    return RatePanel(dates=[r[0] for r in rows], currencies=codes, rates=rates, reference=schema.reference)


def read_rate_panel(path, schema: Schema) -> RatePanel:
    with open(path, newline="") as fh:
        return parse_rate_panel(fh, schema)


def serialize_panel(panel: RatePanel, schema: Schema) -> str:
    """Inverse of :func:`parse_rate_panel`; floats are written with ``repr`` so
    parsing the output reproduces the panel exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=schema.delimiter, lineterminator="\n")
    writer.writerow([schema.date_column, *panel.currencies])
    for d, row in zip(panel.dates, panel.rates):
        cells = [schema.missing_token if np.isnan(v) else repr(float(v)) for v in row]
        writer.writerow([d.strftime(schema.date_format), *cells])
    return buf.getvalue()


def align_calendar(panel: RatePanel, policy: MissingPolicy = MissingPolicy()) -> RatePanel:
    """Return a dense panel according to ``policy``.

    ``forward-fill`` carries the last observation over at most
    ``max_fill_run`` consecutive missing days per column; dates it cannot
    fill (longer gaps, leading gaps) are dropped.
    """
    rates = np.array(panel.rates, dtype=float)
    missing = np.isnan(rates)
    if rates.shape[0] and missing.all(axis=0).any():
        bad = [c for c, m in zip(panel.currencies, missing.all(axis=0)) if m]
        raise UnrecoverableColumnError(f"columns entirely missing: {bad}")

    filled = 0
    if policy.mode is MissingMode.ERROR:
        if missing.any():
            i, c = map(int, np.argwhere(missing)[0])
            raise MissingDataError(
                f"{int(missing.sum())} missing cells, first at {panel.dates[i]} / {panel.currencies[c]}"
            )
        keep = np.ones(len(panel.dates), dtype=bool)
    elif policy.mode is MissingMode.DROP_DATE:
        keep = ~missing.any(axis=1)
    else:
        keep = np.ones(len(panel.dates), dtype=bool)
        for c in range(rates.shape[1]):
            run = 0
            last = np.nan
            for i in range(rates.shape[0]):
                if not missing[i, c]:
                    run = 0
                    last = rates[i, c]
                    continue
                run += 1
                if run <= policy.max_fill_run and not np.isnan(last):
                    rates[i, c] = last
                else:
                    keep[i] = False
        # cells filled on dates that end up dropped were never used
        filled = int((np.isnan(panel.rates) & ~np.isnan(rates) & keep[:, None]).sum())

    report = AlignReport(mode=policy.mode.value, dropped_dates=int((~keep).sum()), filled_cells=filled)
    dates = [d for d, k in zip(panel.dates, keep) if k]
    return RatePanel(dates=dates, currencies=panel.currencies, rates=rates[keep],
                     reference=panel.reference, report=report)


def rebase(panel: RatePanel, base: str) -> CrossRatePanel:
    """Express every other currency in units per one ``base``.

    Uses the triangle relation  X/base = (X/ref) / (base/ref), with the
    reference's own rate identically 1.
    """
    if base == panel.reference:
        return CrossRatePanel(base=base, dates=panel.dates, currencies=panel.currencies, rates=panel.rates)
    if base not in panel.currencies:
        raise UnknownCurrencyError(f"unknown base currency {base!r}")
    if not panel.is_dense:
        raise MissingDataError("rebase requires a dense panel; run align_calendar first")
    codes = [c for c in panel.all_codes if c != base]
    full = np.column_stack([np.ones(len(panel.dates)), panel.rates])
    base_col = full[:, panel.all_codes.index(base)]
    idx = [panel.all_codes.index(c) for c in codes]
    cross = full[:, idx] / base_col[:, None]
    return CrossRatePanel(base=base, dates=panel.dates, currencies=codes, rates=cross)


def rebase_all(panel: RatePanel, bases: Optional[Iterable[str]] = None) -> dict:
    bases = panel.all_codes if bases is None else bases
    return {b: rebase(panel, b) for b in bases}
