"""Run the reconstruction chain on a sampled circle and a jittered copy.

Prints the delta chain, the link verdicts and the Betti numbers as JSON.
"""

import argparse
import sys

from selective_rips.gluing import identity_correspondence
from selective_rips.io import dumps
from selective_rips.pipeline import delta_chain, jittered_copy, reconstruct
from selective_rips.sampling import SampleSpec, sample
from selective_rips.srips import ScaleSequence


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--every", type=int, default=4, help="center spacing in sample indices")
    ap.add_argument("--scales", default="0.12,0.11")
    ap.add_argument("--fraction", type=float, default=0.25, help="jitter as a fraction of delta")
    ap.add_argument("--jitter", type=float, help="absolute jitter; overrides --fraction")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    model = sample(SampleSpec("circle", args.n))
    centers = list(range(0, args.n, args.every))
    chain = delta_chain(model, centers, args.alpha)
    jitter = args.jitter if args.jitter is not None else chain.delta * args.fraction
    target = jittered_copy(model, jitter, seed=args.seed)
    rep = reconstruct(model, target, identity_correspondence(model.n), centers, args.alpha,
                      ScaleSequence.parse(args.scales))
    sys.stdout.write(dumps({"jitter": jitter, **rep.to_dict()}))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
