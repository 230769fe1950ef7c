"""Mellin identity residual as the cutoff X grows, for a few small fields."""
import argparse
import csv
import sys

import mpmath

from bslab.lfunc import Field, mellin_residual


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fields", default="Q;-3;-4;5;-4,8", help="semicolon-separated field descriptors")
    ap.add_argument("--s", type=float, default=2.0)
    ap.add_argument("--xs", default="1000,10000,100000,1000000")
    args = ap.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["field", "s", "X", "residual", "tail_estimate", "flipped_sign_residual"])
    for desc in args.fields.split(";"):
        fld = Field.parse(desc)
        for X in (int(x) for x in args.xs.split(",")):
            r = mellin_residual(fld, args.s, X)
            w.writerow([desc, args.s, X, mpmath.nstr(r.residual, 6), mpmath.nstr(r.tail_estimate, 6),
                        mpmath.nstr(r.flipped_sign_residual, 6)])


if __name__ == "__main__":
    main()
