"""Hollow n-simplex from n+1 collinear points, for a range of n."""

import argparse
import sys

from selective_rips.io import dumps
from selective_rips.pipeline import counterexample


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--r1", type=float, default=1.0)
    args = ap.parse_args(argv)

    rows = []
    for n in range(2, args.max_n + 1):
        rep = counterexample(n, r1=args.r1)
        rows.append({"n": n, "scales": list(rep.scales.prefix), "counts": list(rep.counts),
                     "betti": list(rep.betti), "crushable": rep.crushable})
    sys.stdout.write(dumps({"rows": rows}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
