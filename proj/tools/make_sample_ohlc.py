"""Generate data/sample_ohlc.csv: a synthetic daily OHLC series.

Geometric random walk for the close, a small overnight gap for the open, and
high/low spread around the open-close range. Deterministic for a given seed.
"""
import argparse
import csv
import datetime as dt

import numpy as np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/sample_ohlc.csv")
    ap.add_argument("--rows", type=int, default=900)
    ap.add_argument("--seed", type=int, default=2016)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    day = dt.date(2016, 1, 4)
    close = 100.0
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "open", "high", "low", "close", "volume"])
        for _ in range(args.rows):
            while day.weekday() >= 5:
                day += dt.timedelta(days=1)
            open_ = close * np.exp(rng.normal(0.0, 0.004))
            close = open_ * np.exp(rng.normal(0.0006, 0.013))
            high = max(open_, close) * np.exp(abs(rng.normal(0.0, 0.006)))
            low = min(open_, close) * np.exp(-abs(rng.normal(0.0, 0.006)))
            volume = int(rng.lognormal(17.0, 0.3))
            w.writerow([day.isoformat(), f"{open_:.4f}", f"{high:.4f}", f"{low:.4f}", f"{close:.4f}", volume])
            day += dt.timedelta(days=1)


if __name__ == "__main__":
    main()
