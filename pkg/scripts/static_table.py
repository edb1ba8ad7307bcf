"""Static L / C table for the nine reference bases, next to the published values.

    python scripts/static_table.py --input rates.csv --schema schema.cfg
    python scripts/static_table.py            # synthetic panel (bases missing from it are skipped)
"""
import argparse

from fxnet.ingestion import Schema, align_calendar, load_schema, read_rate_panel
from fxnet.export import export_table
from fxnet.pipeline import analyze_base
from fxnet.signals import ALL_KINDS
from fxnet.synthetic import synthetic_panel

BASES = ("CHF", "CZK", "EUR", "GBP", "GHS", "JPY", "PLN", "USD", "XAU")
PUBLISHED = {
    ("L", "return"): (1.63, 1.73, 1.53, 2.33, 1.55, 1.95, 1.99, 4.10, 1.65),
    ("L", "sign"): (1.95, 1.77, 1.72, 2.12, 2.02, 1.85, 1.79, 4.25, 1.86),
    ("L", "abs"): (1.59, 1.67, 1.60, 1.93, 1.96, 1.69, 1.67, 4.13, 1.64),
    ("C", "return"): (0.431, 0.202, 0.333, 0.311, 0.929, 0.512, 0.511, 0.111, 0.712),
    ("C", "sign"): (0.358, 0.181, 0.312, 0.329, 0.919, 0.391, 0.371, 0.139, 0.911),
    ("C", "abs"): (0.326, 0.175, 0.309, 0.308, 0.921, 0.377, 0.389, 0.139, 0.771),
}

p = argparse.ArgumentParser()
p.add_argument("--input")
p.add_argument("--schema")
p.add_argument("--path-mode", default="weighted", choices=["hop", "weighted"])
p.add_argument("--clip-sigma", type=float, default=10.0)
args = p.parse_args()

if args.input:
    schema = load_schema(args.schema) if args.schema else Schema()
    panel = align_calendar(read_rate_panel(args.input, schema), schema.missing_policy)
else:
    panel = synthetic_panel(seed=0)
bases = [b for b in BASES if b in panel.all_codes]
reports = [r for b in bases for _, r in analyze_base(panel, b, ALL_KINDS, args.clip_sigma, args.path_mode)]
print("computed:")
print(export_table(reports))
print("published:")
print("metric,kind," + ",".join(BASES))
for (metric, kind), vals in PUBLISHED.items():
    print(f"{metric},{kind}," + ",".join(f"{v:.{2 if metric == 'L' else 3}f}" for v in vals))
for b in bases:
    hubs = {r.kind: f"{r.hub}({r.degrees[r.hub]})" for r in reports if r.base == b}
    print(f"{b} hubs: {hubs}")
