"""Median Brauer-Siegel ratio per decade of |D| for imaginary (or real) quadratic fields.

    python scripts/siegel_decades.py --kmax 5 --out decades.csv
"""
import argparse
import csv
import sys
import time

import mpmath

from bslab.family_sweep import sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sign", choices=["imaginary", "real"], default="imaginary")
    ap.add_argument("--kmin", type=int, default=2)
    ap.add_argument("--kmax", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    rows = []
    for k in range(args.kmin, args.kmax + 1):
        t0 = time.perf_counter()
        s = sweep(args.sign, 10**k, 10 ** (k + 1), threads=args.threads)
        rows.append([k, s.count, mpmath.nstr(s.median_ratio, 8), mpmath.nstr(s.mean_ratio, 8),
                     mpmath.nstr(s.min_stark_ratio, 6), f"{time.perf_counter() - t0:.1f}"])
        print(f"k={k}: {s.count} fields, median {mpmath.nstr(s.median_ratio, 6)}", file=sys.stderr)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["decade", "count", "median_ratio", "mean_ratio", "min_stark_ratio", "seconds"])
    w.writerows(rows)
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
