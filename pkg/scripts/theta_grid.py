"""theta = 1/(I g) over a grid of (m, n, g); shows log(theta)/g -> 0 as g grows."""
import argparse
import csv
import sys

import mpmath

from bslab.regions import gbs_theta


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", default="1,2,4,8")
    ap.add_argument("--ns", default="2,6,24")
    ap.add_argument("--gmax-exp", type=int, default=8, help="g runs over 10^1 .. 10^gmax-exp")
    ap.add_argument("--c", default="1")
    args = ap.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", "n", "g", "I", "theta", "log_theta_over_g"])
    for m in map(int, args.ms.split(",")):
        for n in map(int, args.ns.split(",")):
            for k in range(1, args.gmax_exp + 1):
                t = gbs_theta(m, n, 10**k, c=mpmath.mpf(args.c))
                w.writerow([m, n, f"1e{k}", mpmath.nstr(t.I, 8), mpmath.nstr(t.theta, 8), mpmath.nstr(t.log_theta_over_g, 8)])


if __name__ == "__main__":
    main()
