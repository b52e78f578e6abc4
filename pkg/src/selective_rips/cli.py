"""Command-line interface: ``srips <command> [options]``.

Every command prints a JSON summary on stdout. Exit status is 0 on success,
1 when a check fails (the JSON carries the witness) and 2 on I/O or parse
errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .config import DEFAULTS, OUTPUT_DIR_ENV
from .crushing import delta1, greedy_crushable
from .gluing import coordinate_cross, glue, identity_correspondence, nearest_correspondence
from .homology import betti, persistence
from .io import (ParseError, barcode_ascii, barcode_csv, barcode_svg, barcode_to_dict,
                 complex_to_dict, dumps, format_complex, format_matrix, read_cloud,
                 read_matrix, write_json)
from .metric import FiniteMetricSpace, MetricError
from .nerve import (build_cover, cover_in_union, good_cover_check, intersection_hausdorff,
                    lebesgue_number, mu_margin, nerve_complex, nerve_iso_check)
from .pipeline import counterexample, delta_chain, jittered_copy, reconstruct
from .sampling import SampleSpec, dense_disk_grid, sample
from .srips import ScaleError, ScaleSequence, build_complex, build_filtration

EXIT_OK, EXIT_CHECK, EXIT_IO = 0, 1, 2


class CheckFailed(Exception):
    """A verification failed; ``report`` is printed before exiting with status 1."""

    def __init__(self, report: dict):
        super().__init__(report.get("reason", "check failed"))
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    """Parsed options shared by all commands."""

    command: str
    matrix: Optional[str] = None
    cloud: Optional[str] = None
    sample: Optional[str] = None
    metric: str = "euclidean"
    scales: Optional[ScaleSequence] = None
    profile: Optional[ScaleSequence] = None
    dim_cap: int = DEFAULTS.dim_cap
    size_cap: int = DEFAULTS.size_cap
    seed: Optional[int] = None
    k_divisor: float = DEFAULTS.k_divisor
    tol: float = DEFAULTS.tau_tri
    out: Optional[str] = None
    formats: tuple = ("json",)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        sources = [s for s in (self.matrix, self.cloud, self.sample) if s is not None]
        if len(sources) > 1:
            raise ParseError("give at most one of --matrix, --cloud, --sample")
        if self.dim_cap < 0 or self.size_cap < 1:
            raise ParseError("caps must be non-negative (size cap at least 1)")
        if self.k_divisor < 8:
            raise ParseError("--k-divisor must be at least 8")

    @property
    def has_input(self) -> bool:
        return any(s is not None for s in (self.matrix, self.cloud, self.sample))


_SAMPLE_KEYS = {"n": "count", "count": "count", "r": "radius", "radius": "radius",
                "length": "length", "mode": "mode", "seed": "seed", "jitter": "jitter",
                "dim": "dim", "sides": "sides", "geodesic": "geodesic"}


def parse_sample(text: str, seed: Optional[int] = None) -> FiniteMetricSpace:
    """``shape:key=value,...``, e.g. ``circle:r=1,n=60`` or ``dense_disk:r=1,r_inf=1``.

    ``dense_disk`` builds a certified delta-dense disk grid with ``delta`` given
    directly or as delta1(r_inf, r).
    """
    shape, _, rest = text.partition(":")
    params: dict = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"sample option {item!r} is not key=value")
        params[key.strip()] = value.strip()
    try:
        if shape == "dense_disk":
            radius = float(params.pop("r", params.pop("radius", 1.0)))
            if "delta" in params:
                delta = float(params.pop("delta"))
            else:
                delta = delta1(float(params.pop("r_inf", radius)), radius)
            if params:
                raise ParseError(f"unknown dense_disk options {sorted(params)}")
            return dense_disk_grid(radius, delta)
        kwargs: dict = {}
        for key, value in params.items():
            if key not in _SAMPLE_KEYS:
                raise ParseError(f"unknown sample option {key!r}")
            name = _SAMPLE_KEYS[key]
            if name in ("count", "dim", "seed"):
                kwargs[name] = int(value)
            elif name == "mode":
                kwargs[name] = value
            elif name == "sides":
                kwargs[name] = tuple(float(v) for v in value.split("x"))
            elif name == "geodesic":
                kwargs[name] = value.lower() in ("1", "true", "yes")
            else:
                kwargs[name] = float(value)
        if "count" not in kwargs:
            raise ParseError("sample spec needs n=<count>")
        if seed is not None and "seed" not in kwargs:
            kwargs["seed"] = seed
        return sample(SampleSpec(shape, **kwargs))
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad sample spec {text!r}: {exc}") from exc


def load_space(cfg: RunConfig) -> FiniteMetricSpace:
    if cfg.matrix is not None:
        return read_matrix(cfg.matrix)
    if cfg.cloud is not None:
        kwargs = {}
        if "radius" in cfg.extra:
            kwargs["radius"] = cfg.extra["radius"]
        if "sides" in cfg.extra:
            kwargs["sides"] = cfg.extra["sides"]
        return read_cloud(cfg.cloud, cfg.metric, **kwargs)
    if cfg.sample is not None:
        return parse_sample(cfg.sample, cfg.seed)
    raise ParseError("no input: give --matrix, --cloud or --sample")


def _scales(cfg: RunConfig) -> ScaleSequence:
    if cfg.scales is None:
        raise ParseError("this command needs --scales or --rips")
    return cfg.scales


def output_path(cfg: RunConfig, default_name: Optional[str] = None) -> Optional[Path]:
    """--out resolved against $SRIPS_OUT; with no --out, $SRIPS_OUT/default_name."""
    base = os.environ.get(OUTPUT_DIR_ENV)
    if cfg.out is not None:
        path = Path(cfg.out)
        if base and not path.is_absolute():
            path = Path(base) / path
    elif base and default_name:
        path = Path(base) / default_name
    else:
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit(summary: dict) -> None:
    sys.stdout.write(dumps(summary))


def cmd_complex(cfg: RunConfig) -> dict:
    space = load_space(cfg)
    scales = _scales(cfg)
    complex_ = build_complex(space, scales, cfg.dim_cap)
    summary = {"command": "complex", "n_points": space.n, "scales": list(scales.prefix),
               "dim_cap": cfg.dim_cap, "counts": complex_.counts()}
    path = output_path(cfg, "complex.json")
    if path is not None:
        if "txt" in cfg.formats or path.suffix == ".txt":
            path.write_text(format_complex(complex_))
        else:
            write_json(complex_to_dict(complex_), path)
        summary["output"] = str(path)
    return summary


def cmd_betti(cfg: RunConfig) -> dict:
    space = load_space(cfg)
    scales = _scales(cfg)
    complex_ = build_complex(space, scales, cfg.dim_cap + 1)
    summary = {"command": "betti", "n_points": space.n, "scales": list(scales.prefix),
               "dim_cap": cfg.dim_cap, "counts": complex_.counts(),
               "betti": betti(complex_, cfg.dim_cap)}
    path = output_path(cfg, "betti.json")
    if path is not None:
        write_json(summary, path)
        summary["output"] = str(path)
    return summary


def cmd_barcode(cfg: RunConfig) -> dict:
    space = load_space(cfg)
    profile = cfg.profile or ScaleSequence((1.0,))
    max_birth = cfg.extra.get("max_birth", math.inf)
    filt = build_filtration(space, profile, cfg.dim_cap + 1, max_birth)
    barcode = persistence(filt, cfg.dim_cap)
    summary = {"command": "barcode", "n_points": space.n, "profile": list(profile.prefix),
               "max_birth": max_birth, "bars": barcode_to_dict(barcode)}
    path = output_path(cfg, "barcode")
    if path is not None:
        written = []
        writers = {"json": lambda p: write_json(summary, p),
                   "csv": lambda p: p.write_text(barcode_csv(barcode)),
                   "svg": lambda p: p.write_text(barcode_svg(barcode)),
                   "txt": lambda p: p.write_text(barcode_ascii(barcode))}
        for fmt in cfg.formats:
            target = path.with_suffix("." + fmt) if len(cfg.formats) > 1 or not path.suffix else path
            writers[fmt](target)
            written.append(str(target))
        summary["outputs"] = written
    else:
        summary["ascii"] = barcode_ascii(barcode)
    return summary


def cmd_crush(cfg: RunConfig) -> dict:
    space = load_space(cfg)
    scales = _scales(cfg)
    strategy = cfg.extra.get("strategy", "farthest-first")
    seq = greedy_crushable(space, scales, strategy, cfg.extra.get("center"))
    summary = {"command": "crush", "n_points": space.n, **seq.to_dict()}
    path = output_path(cfg, "crush.json")
    if path is not None:
        write_json(summary, path)
    if not seq.success:
        summary["reason"] = "no crushing sequence reaches diameter below r_inf"
        raise CheckFailed(summary)
    return summary


def _centers(text: Optional[str], n: int) -> list[int]:
    if text is None or text == "all":
        return list(range(n))
    if text.startswith("every:"):
        step = int(text.split(":", 1)[1])
        if step < 1:
            raise ParseError("every:k needs k >= 1")
        return list(range(0, n, step))
    try:
        centers = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"bad center list {text!r}") from exc
    if not centers or min(centers) < 0 or max(centers) >= n:
        raise ParseError(f"centers must be indices in 0..{n - 1}")
    return centers


def cmd_nerve_check(cfg: RunConfig) -> dict:
    space = load_space(cfg)
    alpha = cfg.extra.get("alpha")
    if alpha is None:
        raise ParseError("nerve-check needs --alpha")
    centers = _centers(cfg.extra.get("centers"), space.n)
    cover = build_cover(space, centers, alpha)
    nerve = nerve_complex(cover, cfg.size_cap)
    summary = {"command": "nerve-check", "n_points": space.n, "centers": centers, "alpha": alpha,
               "covering": cover.covering, "nerve_counts": nerve.counts(),
               "nerve_betti": betti(nerve, min(cfg.dim_cap, cfg.size_cap - 1)),
               "mu": mu_margin(space, centers, alpha, cfg.size_cap),
               "lebesgue_number": lebesgue_number(cover) if cover.covering else None}
    failed = not cover.covering
    target_spec = cfg.extra.get("target")
    if target_spec is not None:
        target = parse_sample(target_spec, cfg.seed)
        if target.n == space.n and cfg.extra.get("correspondence", "identity") == "identity":
            pairs = identity_correspondence(space.n)
        elif space.coords is not None and target.coords is not None:
            pairs = nearest_correspondence(coordinate_cross(space, target))
        else:
            raise ParseError("no correspondence: sizes differ and coordinates are missing")
        union = glue(space, target, pairs)
        right = cover_in_union(union, centers, alpha, "right")
        iso = nerve_iso_check(cover, right, cfg.size_cap)
        inter = intersection_hausdorff(union, centers, alpha, cfg.size_cap)
        summary.update({"declared_bound": union.declared_bound, "nerve_iso": bool(iso),
                        "nerve_witness": iso.witness, "intersections": inter.to_dict()})
        failed |= not iso or not inter.ok
        cover = right
    if cfg.scales is not None:
        good = good_cover_check(cover, cfg.scales, cfg.dim_cap, cfg.size_cap)
        summary["good_cover"] = good.to_dict()
        failed |= not good.ok
    path = output_path(cfg, "nerve_check.json")
    if path is not None:
        write_json(summary, path)
    if failed:
        summary["reason"] = "a cover or nerve check failed"
        raise CheckFailed(summary)
    return summary


def cmd_reconstruct(cfg: RunConfig) -> dict:
    model = load_space(cfg) if cfg.has_input else parse_sample("circle:r=1,n=60")
    alpha = cfg.extra.get("alpha", 0.5)
    m = cfg.extra.get("m", 2.0)
    centers = _centers(cfg.extra.get("centers", "every:4"), model.n)
    scales = cfg.scales or ScaleSequence((0.12, 0.11))
    chain = delta_chain(model, centers, alpha, m, cfg.k_divisor, cfg.size_cap)
    jitter = cfg.extra.get("jitter")
    if jitter is None:
        if chain.delta is None:
            raise CheckFailed({"command": "reconstruct", "reason": "alpha is a critical radius",
                               "chain": chain.to_dict()})
        jitter = chain.delta * cfg.extra.get("jitter_fraction", 0.25)
    target = jittered_copy(model, jitter, cfg.seed if cfg.seed is not None else 0)
    report = reconstruct(model, target, identity_correspondence(model.n), centers, alpha,
                         scales, m, cfg.k_divisor, cfg.dim_cap, cfg.size_cap)
    summary = {"command": "reconstruct", "n_points": model.n, "centers": centers,
               "scales": list(scales.prefix), "jitter": jitter, **report.to_dict()}
    path = output_path(cfg, "reconstruct.json")
    if path is not None:
        write_json(summary, path)
    if not report.ok:
        failed = [link.name for link in report.links if not link.ok]
        summary["reason"] = f"failed links: {', '.join(failed)}"
        raise CheckFailed(summary)
    return summary


def cmd_counterexample(cfg: RunConfig) -> dict:
    n = cfg.extra.get("n", 3)
    try:
        report = counterexample(n, cfg.scales, cfg.extra.get("r1", 1.0))
    except ValueError as exc:
        raise CheckFailed({"command": "counterexample", "reason": str(exc)}) from exc
    summary = {"command": "counterexample", **report.to_dict()}
    path = output_path(cfg, "counterexample.json")
    if path is not None:
        write_json(summary, path)
    return summary


def cmd_sample(cfg: RunConfig) -> dict:
    space = load_space(cfg)
    summary = {"command": "sample", "n_points": space.n, "diameter": space.diameter(),
               "shape": space.meta.get("shape")}
    path = output_path(cfg)
    if path is None:
        sys.stdout.write(format_matrix(space))
        return {}
    if path.suffix == ".json":
        write_json({"distances": space.dist.tolist(),
                    "coords": None if space.coords is None else space.coords.tolist()}, path)
    else:
        path.write_text(format_matrix(space))
    summary["output"] = str(path)
    return summary


COMMANDS = {
    "complex": cmd_complex,
    "betti": cmd_betti,
    "barcode": cmd_barcode,
    "crush": cmd_crush,
    "nerve-check": cmd_nerve_check,
    "reconstruct": cmd_reconstruct,
    "counterexample": cmd_counterexample,
    "sample": cmd_sample,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srips", description="Selective Rips complexes, crushings and nerves.")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--matrix", help="distance matrix (.json or lower-triangular text)")
    src.add_argument("--cloud", help="CSV point cloud")
    src.add_argument("--sample", help="sampler spec such as circle:r=1,n=60")
    src.add_argument("--metric", default="euclidean", choices=["euclidean", "circle", "flat_torus"],
                     help="metric for --cloud")
    src.add_argument("--radius", type=float, help="circle radius for --cloud")
    src.add_argument("--sides", help="torus sides for --cloud, e.g. 1x1")
    opts = common.add_argument_group("options")
    opts.add_argument("--scales", help="comma-separated r_1,r_2,...; the last value repeats")
    opts.add_argument("--rips", type=float, help="constant scale r (plain Rips complex)")
    opts.add_argument("--profile", help="filtration profile 1,p_2,...")
    opts.add_argument("--dim-cap", type=int, default=DEFAULTS.dim_cap)
    opts.add_argument("--size-cap", type=int, default=DEFAULTS.size_cap)
    opts.add_argument("--seed", type=int)
    opts.add_argument("--k-divisor", type=float, default=DEFAULTS.k_divisor)
    opts.add_argument("--tol", type=float, default=DEFAULTS.tau_tri)
    opts.add_argument("--out", help=f"output path (relative paths resolve against ${OUTPUT_DIR_ENV})")
    opts.add_argument("--format", default="json",
                      help="json, csv, svg or txt; barcode accepts a comma list such as csv,svg")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("complex", parents=[common], help="build sRips and report simplex counts")
    sub.add_parser("betti", parents=[common], help="Betti numbers of sRips over GF(2)")
    p = sub.add_parser("barcode", parents=[common], help="persistence of the profile filtration")
    p.add_argument("--max-birth", type=float, default=math.inf)
    p = sub.add_parser("crush", parents=[common], help="search for a crushing sequence")
    p.add_argument("--strategy", default="farthest-first",
                   choices=["farthest-first", "exhaustive-elementary"])
    p.add_argument("--center", type=int)
    p = sub.add_parser("nerve-check", parents=[common], help="cover, nerve and margin checks")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--centers", help="'all', 'every:k' or a comma list of indices")
    p.add_argument("--target", help="sampler spec of a nearby space to compare against")
    p.add_argument("--correspondence", default="identity", choices=["identity", "nearest"])
    p = sub.add_parser("reconstruct", parents=[common], help="run the reconstruction chain")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--centers", default="every:4")
    p.add_argument("--m", type=float, default=2.0, help="scale window ratio M")
    p.add_argument("--jitter", type=float, help="absolute perturbation of the copy")
    p.add_argument("--jitter-fraction", type=float, default=0.25,
                   help="perturbation as a fraction of the admissible delta")
    p = sub.add_parser("counterexample", parents=[common], help="hollow n-simplex example")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r1", type=float, default=1.0)
    sub.add_parser("sample", parents=[common], help="write a sampled distance matrix")
    return parser


_EXTRA = ("max_birth", "strategy", "center", "alpha", "centers", "target", "correspondence",
          "m", "jitter", "jitter_fraction", "n", "r1", "radius")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.scales is not None and args.rips is not None:
        raise ParseError("give --scales or --rips, not both")
    scales = None
    if args.scales is not None:
        scales = ScaleSequence.parse(args.scales)
    elif args.rips is not None:
        scales = ScaleSequence.constant(args.rips)
    profile = ScaleSequence.parse(args.profile) if args.profile else None
    if profile is None and args.command == "barcode" and args.rips is not None:
        profile = ScaleSequence((1.0,))
    formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
    bad = [f for f in formats if f not in ("json", "csv", "svg", "txt")]
    if bad or not formats:
        raise ParseError(f"unknown format {bad or args.format!r}")
    extra = {k: getattr(args, k) for k in _EXTRA if getattr(args, k, None) is not None}
    if args.sides:
        extra["sides"] = tuple(float(v) for v in args.sides.split("x"))
    return RunConfig(args.command, args.matrix, args.cloud, args.sample, args.metric, scales,
                     profile, args.dim_cap, args.size_cap, args.seed, args.k_divisor, args.tol,
                     args.out, formats, extra)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        summary = COMMANDS[cfg.command](cfg)
    except CheckFailed as exc:
        _emit(exc.report)
        return EXIT_CHECK
    except (ParseError, ScaleError, MetricError, OSError, MemoryError) as exc:
        sys.stderr.write(f"srips: error: {exc}\n")
        return EXIT_IO
    if summary:
        _emit(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
