"""End-to-end driver: ingest, rebase, signals, networks, metrics, artifacts."""
from __future__ import annotations

import contextlib
import hashlib
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import export
from .errors import FxNetError, PipelineError, UnknownCurrencyError, UsageError
from .ingestion import RatePanel, Schema, align_calendar, load_schema, read_rate_panel, rebase
from .metrics import PathLengthMode, TopologyReport, topology_report
from .netcore import network
from .rolling import METRICS, WindowSpec, linear_trend, rolling_metrics
from .signals import ALL_KINDS, ClipPolicy, SignalKind, clip_outliers, decompose, log_returns, select_signal

log = logging.getLogger(__name__)

DIGEST = "sha256"
FORMATS = ("dot", "graphml", "csv", "json")


@dataclass
class RunConfig:
    input: Optional[str] = None
    schema: object = None  # Schema, path to a schema file, or None for defaults
    bases: object = "all"
    kinds: Sequence = ALL_KINDS
    clip_sigma: float = 10.0
    window: WindowSpec = field(default_factory=WindowSpec)
    path_mode: PathLengthMode = PathLengthMode.WEIGHTED
    out: str = "out"
    formats: Sequence[str] = ("dot", "csv")
    metrics: Sequence[str] = METRICS
    jobs: int = 1

    def __post_init__(self):
        self.kinds = tuple(dict.fromkeys(SignalKind.parse(k) for k in self.kinds))
        self.path_mode = PathLengthMode(self.path_mode)
        self.formats = tuple(dict.fromkeys(self.formats))
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise UsageError(f"unknown formats {bad}; expected {FORMATS}")
        if isinstance(self.bases, str):
            self.bases = "all" if self.bases == "all" else (self.bases,)
        elif "all" in self.bases:
            self.bases = "all"
        else:
            self.bases = tuple(dict.fromkeys(self.bases))
        if not self.kinds or not self.bases:
            raise UsageError("need at least one base and one kind")
        bad_metrics = set(self.metrics) - set(METRICS)
        if bad_metrics or not self.metrics:
            raise UsageError(f"metrics must be a nonempty subset of {METRICS}")
        ClipPolicy(self.clip_sigma)

    def resolved_schema(self) -> Schema:
        if self.schema is None:
            return Schema()
        if isinstance(self.schema, Schema):
            return self.schema
        return load_schema(self.schema)

    def resolve_bases(self, panel: RatePanel) -> tuple:
        if self.bases == "all":
            return panel.all_codes
        unknown = [b for b in self.bases if b not in panel.all_codes]
        if unknown:
            raise UnknownCurrencyError(f"bases not in input: {unknown}")
        return tuple(self.bases)


@contextlib.contextmanager
def stage(name, base=None, kind=None):
    try:
        yield
    except PipelineError:
        raise
    except (FxNetError, OSError) as exc:
        raise PipelineError(exc, base=base, kind=getattr(kind, "value", kind), stage=name) from exc


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def atomic_write(path: Path, text: str) -> bytes:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = text.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise
    return data


class ArtifactWriter:
    """Writes files under ``out`` and records them for the manifest."""

    def __init__(self, out, command: str):
        self.out = Path(out)
        self.command = command
        self.entries = []

    def write(self, rel: str, text: str, role: str, **meta):
        data = atomic_write(self.out / rel, text)
        entry = {"path": rel, "role": role, DIGEST: digest_bytes(data), "bytes": len(data), "complete": True}
        entry.update({k: v for k, v in meta.items() if v is not None})
        self.entries.append(entry)
        return self.out / rel

    def discard(self):
        for e in self.entries:
            with contextlib.suppress(FileNotFoundError):
                (self.out / e["path"]).unlink()
        self.entries = []

    def manifest(self, complete: bool, inputs: dict, error: Optional[str] = None) -> dict:
        m = {
            "command": self.command,
            "digest_algorithm": DIGEST,
            "inputs": inputs,
            "complete": complete,
            "artifacts": sorted(self.entries, key=lambda e: e["path"]),
        }
        if error is not None:
            m["error"] = error
        return m

    def finish(self, manifest: dict) -> Path:
        text = json.dumps(manifest, indent=1, sort_keys=True) + "\n"
        atomic_write(self.out / "manifest.json", text)
        return self.out / "manifest.json"


def load_panel(config: RunConfig):
    if config.input is None:
        raise UsageError("no input file given")
    schema = config.resolved_schema()
    with stage("ingest"):
        raw = Path(config.input).read_bytes()
        panel = read_rate_panel(config.input, schema)
        panel = align_calendar(panel, schema.missing_policy)
    inputs = {"input_" + DIGEST: digest_bytes(raw), "dates": len(panel.dates),
              "currencies": len(panel.all_codes), "reference": panel.reference}
    return panel, inputs


def base_signals(panel: RatePanel, base: str, clip_sigma: float):
    with stage("rebase", base):
        cross = rebase(panel, base)
    with stage("returns", base):
        ret = log_returns(cross)
    with stage("clip", base):
        ret = clip_outliers(ret, ClipPolicy(clip_sigma))
    with stage("decompose", base):
        return decompose(ret)


def analyze_base(panel: RatePanel, base: str, kinds, clip_sigma: float, mode) -> list:
    bundle = base_signals(panel, base, clip_sigma)
    out = []
    for kind in kinds:
        with stage("network", base, kind):
            _, _, weights, tree = network(select_signal(bundle, kind), bundle.currencies, base=base, kind=kind)
        with stage("metrics", base, kind):
            out.append((tree, topology_report(tree, weights, mode)))
    return out


def _analyze_job(args):
    return analyze_base(*args)


def _rolling_job(args):
    panel, base, kinds, clip_sigma, spec, metrics, mode = args
    bundle = base_signals(panel, base, clip_sigma)
    series = []
    for kind in kinds:
        with stage("rolling", base, kind):
            series.extend(rolling_metrics(bundle, kind, spec, metrics, mode))
    return series


def _fan_out(fn, jobs, n_workers):
    if n_workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, jobs))


def _write_results(writer: ArtifactWriter, results, formats, inputs_meta):
    tree_formats = [f for f in formats if f in export.TREE_FORMATS] or ["dot"]
    for tree, _ in results:
        for fmt in tree_formats:
            writer.write(f"trees/{tree.base}_{tree.kind}.{fmt}", export.export_tree(tree, fmt),
                         role="tree", base=tree.base, kind=tree.kind)
    reports = [r for _, r in results]
    writer.write("table.csv", export.export_table(reports), role="table")
    if "json" in formats:
        writer.write("reports.json", json.dumps([export.report_to_dict(r) for r in reports], indent=1) + "\n",
                     role="reports")
    cache = {
        "inputs": inputs_meta,
        "results": [{"tree": export.tree_to_dict(t), "report": export.report_to_dict(r)} for t, r in results],
    }
    writer.write("results.json", json.dumps(cache, indent=1, sort_keys=True) + "\n", role="cache")


def _guarded(writer: ArtifactWriter, inputs: dict, body):
    try:
        body()
    except PipelineError as exc:
        writer.discard()
        writer.finish(writer.manifest(False, inputs, error=str(exc)))
        raise
    except FxNetError as exc:
        writer.discard()
        writer.finish(writer.manifest(False, inputs, error=str(exc)))
        raise PipelineError(exc, stage="write") from exc
    return writer.finish(writer.manifest(True, inputs))


def run_pipeline(config: RunConfig) -> dict:
    """Static run over every (base, kind); returns the manifest dict."""
    writer = ArtifactWriter(config.out, "analyze")
    inputs = {}

    def body():
        panel, meta = load_panel(config)
        inputs.update(meta)
        bases = config.resolve_bases(panel)
        jobs = [(panel, b, config.kinds, config.clip_sigma, config.path_mode) for b in bases]
        results = [item for chunk in _fan_out(_analyze_job, jobs, config.jobs) for item in chunk]
        log.info("analyzed %d networks", len(results))
        _write_results(writer, results, config.formats, inputs)

    path = _guarded(writer, inputs, body)
    return json.loads(path.read_text())


def run_rolling(config: RunConfig) -> dict:
    """Windowed metric series plus a linear trend per series."""
    writer = ArtifactWriter(config.out, "rolling")
    inputs = {}

    def body():
        panel, meta = load_panel(config)
        inputs.update(meta, window={"width": config.window.width, "step": config.window.step},
                      path_mode=config.path_mode.value)
        bases = config.resolve_bases(panel)
        jobs = [(panel, b, config.kinds, config.clip_sigma, config.window, config.metrics, config.path_mode)
                for b in bases]
        all_series = [s for chunk in _fan_out(_rolling_job, jobs, config.jobs) for s in chunk]
        fits = {}
        for s in all_series:
            writer.write(f"series/{s.base}_{s.kind}_{s.metric}.json", export.export_series(s),
                         role="series", base=s.base, kind=s.kind)
            with stage("trend", s.base, s.kind):
                fits[(s.base, s.kind, s.metric)] = linear_trend(s)
        writer.write("trends.csv", export.export_trends(fits), role="trends")

    path = _guarded(writer, inputs, body)
    return json.loads(path.read_text())


def run_export(cache_path, out, formats=("dot", "csv")) -> dict:
    """Re-serialize a ``results.json`` cache written by :func:`run_pipeline`."""
    writer = ArtifactWriter(out, "export")
    inputs = {}

    def body():
        with stage("load-cache"):
            try:
                raw = Path(cache_path).read_bytes()
                cache = json.loads(raw)
            except (OSError, ValueError) as exc:
                raise UsageError(f"cannot read results cache {cache_path}: {exc}") from None
        inputs.update({"cache_" + DIGEST: digest_bytes(raw)})
        results = []
        for item in cache["results"]:
            tree = export.tree_from_dict(item["tree"])
            r = item["report"]
            report = TopologyReport(base=r["base"], kind=r["kind"], L=r["L"], C=r["C"], degrees=r["degrees"],
                                    hub=r["hub"], path_mode=r["path_mode"],
                                    window=None if r["window"] is None else tuple(r["window"]))
            results.append((tree, report))
        _write_results(writer, results, formats, cache.get("inputs", {}))

    path = _guarded(writer, inputs, body)
    return json.loads(path.read_text())
