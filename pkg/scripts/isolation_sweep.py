"""Isolation sweep over surgeries on one cusp, written as one CSV.

    python scripts/isolation_sweep.py --manifold napoleon --filled c1 --out sweep.csv
"""
import argparse
import csv
import sys

from cuspiso.experiments import SweepConfig, run_sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--manifold", default="napoleon")
    ap.add_argument("--filled", default="c1")
    ap.add_argument("--pq", action="append", help="p,q (repeatable); default sweep otherwise")
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    cfg = SweepConfig(args.manifold, args.filled)
    if args.pq:
        cfg = SweepConfig(args.manifold, args.filled, tuple(tuple(int(x) for x in s.split(",")) for s in args.pq))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["p", "q", "cusp", "delta", "isolated", "volume"])
    for (p, q), r in zip(cfg.surgeries, run_sweep(cfg)):
        for c in r.observed:
            w.writerow([p, q, c, f"{r.deltas[c]:.3e}", str(r.verdicts[c]).lower(), f"{r.volume_after:.10f}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
