"""Crush a certified dense disk grid farthest-first and verify every step.

With --glued the grid is also glued to a perturbed copy and the copy is
crushed through the union.
"""

import argparse
import sys
import time

import numpy as np

from selective_rips.crushing import crushable_in_union, delta1, delta1_prime, greedy_crushable, replay
from selective_rips.gluing import glue, identity_correspondence
from selective_rips.homology import betti
from selective_rips.io import dumps
from selective_rips.sampling import dense_disk_grid, dense_disk_size_estimate, euclidean_space
from selective_rips.srips import ScaleSequence, build_complex


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=1.0, help="disk radius")
    ap.add_argument("--scales", default="1,1")
    ap.add_argument("--contiguity-cap", type=int, default=2)
    ap.add_argument("--betti", action="store_true", help="also compute Betti numbers up to dim 2")
    ap.add_argument("--glued", action="store_true")
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args(argv)

    scales = ScaleSequence.parse(args.scales)
    delta = delta1(scales.r_inf, args.alpha)
    out = {"alpha": args.alpha, "scales": list(scales.prefix), "delta1": delta,
           "estimated_points": dense_disk_size_estimate(args.alpha, delta)}
    t0 = time.perf_counter()
    try:
        grid = dense_disk_grid(args.alpha, delta)
    except MemoryError as exc:
        out["error"] = str(exc)
        sys.stdout.write(dumps(out))
        return 2
    out["n_points"] = grid.n
    if args.glued:
        bound = delta1_prime(scales.r_inf, args.alpha)
        rng = np.random.default_rng(args.seed)
        moved = euclidean_space(grid.coords + rng.uniform(-bound / 3, bound / 3, grid.coords.shape))
        union = glue(grid, moved, identity_correspondence(grid.n))
        seq = crushable_in_union(union, scales, args.alpha)
        out.update(declared_bound=union.declared_bound, delta1_prime=bound)
        checked = replay(moved, seq)
    else:
        seq = greedy_crushable(grid, scales, "farthest-first", center=0)
        checked = replay(grid, seq, contiguity_cap=args.contiguity_cap)
    out.update(success=seq.success, steps=len(seq.steps), terminal_diameter=seq.terminal_diameter,
               replay=bool(checked))
    if args.betti and not args.glued:
        out["betti"] = betti(build_complex(grid, scales, 3), 2)
    out["seconds"] = time.perf_counter() - t0
    sys.stdout.write(dumps(out))
    return 0 if seq.success and checked else 1


if __name__ == "__main__":
    sys.exit(main())
