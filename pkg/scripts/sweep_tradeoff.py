"""Hybrid time/space sweep over k.

Sweeps the fixture corpus (all inputs up to length 4) and the bushy eraser
machine, writes the ledger rows to CSV, prints median T' and S' per k and
fits the calibrated model to the eraser points.

    python3 scripts/sweep_tradeoff.py --out sweep.csv
"""

import argparse
import csv
from statistics import median

from revcomp.accounting import TradeoffPoint, calibrate, k_range_for, median_trend
from revcomp.corpus import bit_strings, eraser, fixture_corpus
from revcomp.revsim import simulate_hybrid, simulate_lmt
from revcomp.revsim.engines import CSV_COLUMNS


def sweep(programs, inputs):
    rows = []
    for p in programs:
        for x in inputs(p):
            T = simulate_lmt(p, x).ledger.T
            for k in k_range_for(T):
                rows.append((p.name, simulate_hybrid(p, x, k).ledger))
    return rows


def show(title, rows):
    pts = [TradeoffPoint.from_ledger(led) for _, led in rows]
    print(f"\n{title}: {len(pts)} runs")
    print(" k   median T'   median S'")
    for k, (t, s) in median_trend(pts).items():
        print(f"{k:2d} {t:11.0f} {s:11.0f}")
    return pts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="CSV file for all ledger rows")
    ap.add_argument("--eraser-space", type=int, nargs="+", default=[5, 6, 7, 8])
    args = ap.parse_args()

    corpus_rows = sweep(fixture_corpus(4), lambda p: bit_strings(4))
    show("fixture corpus", corpus_rows)

    erasers = [eraser(s, 4) for s in args.eraser_space]
    eraser_rows = sweep(erasers, lambda p: ["1" * p.space, "0" * p.space])
    pts = show("eraser machines", eraser_rows)
    for p in erasers:
        mine = [led for name, led in eraser_rows if name == p.name and led.S == p.space]
        best = min(mine, key=lambda led: led.sim_steps)
        print(f"  S={p.space} T={best.T}: cheapest k={best.k} "
              f"(k=0 costs {median(l.sim_steps for l in mine if l.k == 0):.0f})")
    print("\ncalibrated on eraser points:", calibrate(pts).report())

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=("machine",) + CSV_COLUMNS, lineterminator="\n")
            w.writeheader()
            for name, led in corpus_rows + eraser_rows:
                w.writerow({"machine": name, **led.csv_row()})
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
