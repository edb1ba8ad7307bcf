"""Moving-window L and C for a few bases with the fitted linear trend per series.

    python scripts/rolling_trend.py --input rates.csv --base EUR --base USD --window 120 --step 5
"""
import argparse

from fxnet.ingestion import Schema, align_calendar, load_schema, read_rate_panel, rebase
from fxnet.rolling import WindowSpec, linear_trend, rolling_metrics
from fxnet.signals import ALL_KINDS, ClipPolicy, prepare_signals
from fxnet.synthetic import synthetic_panel

p = argparse.ArgumentParser()
p.add_argument("--input")
p.add_argument("--schema")
p.add_argument("--base", action="append")
p.add_argument("--window", type=int, default=120)
p.add_argument("--step", type=int, default=5)
p.add_argument("--path-mode", default="weighted", choices=["hop", "weighted"])
args = p.parse_args()

if args.input:
    schema = load_schema(args.schema) if args.schema else Schema()
    panel = align_calendar(read_rate_panel(args.input, schema), schema.missing_policy)
else:
    panel = synthetic_panel(seed=0)
spec = WindowSpec(args.window, args.step)
print("base,kind,metric,points,mean,std,slope_per_day,residual_se")
for base in args.base or ["EUR", "USD"]:
    bundle = prepare_signals(rebase(panel, base), ClipPolicy())
    for kind in ALL_KINDS:
        for s in rolling_metrics(bundle, kind, spec, mode=args.path_mode):
            fit = linear_trend(s)
            v = s.values
            print(f"{base},{kind.table_label},{s.metric},{len(v)},{v.mean():.4f},{v.std():.4f},"
                  f"{fit.slope:.3e},{fit.residual_se:.4f}")
