"""``fxnet`` command line: analyze, rolling, export."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml

from .errors import FxNetError
from .pipeline import FORMATS, RunConfig, run_export, run_pipeline, run_rolling
from .rolling import METRICS, WindowSpec

CONFIG_KEYS = ("input", "schema", "base", "kind", "clip_sigma", "window", "step", "path_mode", "format", "out",
               "metric", "jobs")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML/JSON file with the same keys as the flags")
    common.add_argument("--input", help="rate table (analyze/rolling) or results.json cache (export)")
    common.add_argument("--schema", help="key = value schema file for the rate table")
    common.add_argument("--base", action="append", help="base currency, repeatable, or 'all'")
    common.add_argument("--kind", action="append", choices=["return", "sign", "amplitude", "abs"])
    common.add_argument("--clip-sigma", dest="clip_sigma", type=float)
    common.add_argument("--window", type=int)
    common.add_argument("--step", type=int)
    common.add_argument("--path-mode", dest="path_mode", choices=["hop", "weighted"])
    common.add_argument("--format", action="append", choices=list(FORMATS))
    common.add_argument("--metric", action="append", choices=list(METRICS))
    common.add_argument("--jobs", type=int, help="worker processes for (base) jobs")
    common.add_argument("--out", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="fxnet", description="Base-currency MST networks of FX returns.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="static network metrics per base and signal kind")
    sub.add_parser("rolling", parents=[common], help="moving-window metric series and trends")
    sub.add_parser("export", parents=[common], help="re-serialize a results.json cache")
    return p


def _settings(args) -> dict:
    settings = {}
    if args.config:
        with open(args.config) as fh:
            loaded = yaml.safe_load(fh) or {}
        unknown = set(loaded) - set(CONFIG_KEYS) - {k.replace("_", "-") for k in CONFIG_KEYS}
        if unknown:
            raise FxNetError(f"unknown config keys: {sorted(unknown)}")
        settings.update({k.replace("-", "_"): v for k, v in loaded.items()})
        base_dir = Path(args.config).parent
        for key in ("input", "schema"):
            if key in settings and not Path(settings[key]).is_absolute():
                settings[key] = str(base_dir / settings[key])
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = v
    for key in ("base", "kind", "format", "metric"):
        if isinstance(settings.get(key), str):
            settings[key] = [settings[key]]
    return settings


def _config(s: dict) -> RunConfig:
    kw = {}
    for src, dst in (("input", "input"), ("schema", "schema"), ("base", "bases"), ("kind", "kinds"),
                     ("clip_sigma", "clip_sigma"), ("path_mode", "path_mode"), ("format", "formats"),
                     ("metric", "metrics"), ("out", "out"), ("jobs", "jobs")):
        if src in s:
            kw[dst] = s[src]
    kw["window"] = WindowSpec(width=int(s.get("window", 120)), step=int(s.get("step", 1)))
    return RunConfig(**kw)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        s = _settings(args)
        if args.command == "export":
            if "input" not in s:
                raise FxNetError("export needs --input pointing at a results.json cache")
            manifest = run_export(s["input"], s.get("out", "out"), s.get("format", ("dot", "csv")))
        else:
            config = _config(s)
            manifest = run_pipeline(config) if args.command == "analyze" else run_rolling(config)
    except FxNetError as exc:
        print(f"fxnet {args.command}: error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"complete": manifest["complete"], "artifacts": len(manifest["artifacts"])}))
    return 0 if manifest["complete"] else 1


if __name__ == "__main__":
    sys.exit(main())
