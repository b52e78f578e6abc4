"""Induced maps between two scale sequences on a circle sample, plus the Rips barcode."""

import argparse
import sys

from selective_rips.homology import betti, induced_rank, persistence
from selective_rips.io import barcode_ascii, barcode_to_dict, dumps
from selective_rips.sampling import SampleSpec, sample
from selective_rips.srips import ScaleSequence, build_complex, build_filtration


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--small", default="0.45,0.3")
    ap.add_argument("--large", default="0.6,0.4")
    ap.add_argument("--max-birth", type=float, default=2.2)
    ap.add_argument("--ascii", action="store_true", help="print the barcode as text instead of JSON")
    args = ap.parse_args(argv)

    space = sample(SampleSpec("circle", args.n))
    sub = build_complex(space, ScaleSequence.parse(args.small), 3)
    sup = build_complex(space, ScaleSequence.parse(args.large), 3)
    bc = persistence(build_filtration(space, ScaleSequence((1.0,)), 2, args.max_birth), 1)
    if args.ascii:
        sys.stdout.write(barcode_ascii(bc))
        return 0
    sys.stdout.write(dumps({
        "betti_small": betti(sub, 2), "betti_large": betti(sup, 2),
        "induced_rank": [induced_rank(sub, sup, d) for d in range(3)],
        "bars": barcode_to_dict(bc),
    }))
    return 0


if __name__ == "__main__":
    sys.exit(main())
