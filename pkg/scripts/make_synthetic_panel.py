"""Write a USD-quoted synthetic rate table plus its schema file.

    python scripts/make_synthetic_panel.py --out data/ --dates 2520 --seed 7
"""
import argparse
from pathlib import Path

from fxnet.ingestion import Schema, serialize_panel
from fxnet.synthetic import synthetic_panel

p = argparse.ArgumentParser()
p.add_argument("--out", default="data")
p.add_argument("--currencies", type=int, default=40)
p.add_argument("--dates", type=int, default=2520)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--intra", type=float, default=0.8)
p.add_argument("--inter", type=float, default=0.1)
args = p.parse_args()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
panel = synthetic_panel(n_currencies=args.currencies, n_dates=args.dates, intra=args.intra, inter=args.inter,
                        seed=args.seed)
(out / "rates.csv").write_text(serialize_panel(panel, Schema()))
(out / "schema.cfg").write_text("date_column = date\ndate_format = %Y-%m-%d\ndelimiter = ,\n"
                                "missing_token = NA\nreference = USD\nmissing_policy = drop-date\n")
print(f"wrote {out / 'rates.csv'} ({len(panel.dates)} dates x {len(panel.all_codes)} currencies)")
