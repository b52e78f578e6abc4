"""End-to-end experiments: the reconstruction chain and the collapse counterexample.

The reconstruction chain compares, for a model space X with a cover C by
alpha-balls and a nearby space Y:

    (i)   X ~ Nerve(C)                  Betti numbers of X's known homotopy type vs the nerve
    (ii)  Nerve(C) = Nerve(C_bar)       C_bar = traces of the same balls on Y
    (iii) Nerve(C_bar) = Nerve(W)       W = selective Rips complexes of the traces
    (iv)  Nerve(W) ~ sRips(Y)           W is a good cover of sRips(Y)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULTS
from .crushing import delta1_prime, greedy_crushable
from .gluing import PseudoMetricUnion, gh_upper_bound, glue
from .homology import betti
from .metric import FiniteMetricSpace, build_space, is_dense
from .nerve import (build_cover, cover_in_union, good_cover_check,
                    intersection_hausdorff, lebesgue_number, mu_margin, nerve_complex,
                    nerve_iso_check, simplices_in_elements)
from .srips import ScaleSequence, build_complex


def reference_betti(meta: dict, dim_cap: int) -> Optional[tuple]:
    """Betti numbers of the continuous exemplar a sample was drawn from."""
    shape = meta.get("shape")
    if shape in ("interval", "disk"):
        known = [1]
    elif shape == "circle":
        known = [1, 1]
    elif shape == "flat_torus":
        dim = len(meta.get("sides", (1.0, 1.0)))
        known = [math.comb(dim, k) for k in range(dim + 1)]
    else:
        return None
    return tuple((known + [0] * (dim_cap + 1))[:dim_cap + 1])


def delta2_prime(model: FiniteMetricSpace, centers: Sequence[int], alpha: float,
                 delta2: float) -> float:
    """A GH bound under which every alpha-ball intersection moves by less than delta2.

    On a finite model the intersections are already finite, so the bound is
    min(delta2/2, alpha minus the largest center distance below alpha, the
    smallest center distance at or above alpha minus alpha).
    """
    d = model.dist[list(centers)]
    below = d[d < alpha]
    at_or_above = d[d >= alpha]
    gap_below = alpha - float(below.max()) if below.size else math.inf
    gap_above = float(at_or_above.min()) - alpha if at_or_above.size else math.inf
    return min(delta2 / 2, gap_below, gap_above)


def choose_delta(delta2p: float, alpha: float, mu: float) -> float:
    return min(delta2p, alpha / 8, mu / 2)


@dataclass(frozen=True)
class DeltaChain:
    alpha: float
    m: float
    k: float
    mu: Optional[float]
    delta1p: float
    delta2: float
    delta2p: float
    delta: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def delta_chain(model: FiniteMetricSpace, centers: Sequence[int], alpha: float, m: float = 2.0,
                k: float = DEFAULTS.k_divisor, size_cap: int = DEFAULTS.size_cap) -> DeltaChain:
    """All tolerances of the reconstruction argument for a finite model.

    delta1' = delta1'(alpha/(4M), alpha) is the crushability tolerance,
    delta2 = delta1'/2 the target intersection accuracy, and
    delta = min(delta2', alpha/8, mu/2) the admissible GH distance. ``delta``
    is None when alpha is a critical radius.
    """
    if m < 1:
        raise ValueError("M must be >= 1")
    d1p = delta1_prime(alpha / (4 * m), alpha, k)
    d2 = d1p / 2
    d2p = delta2_prime(model, centers, alpha, d2)
    mu = mu_margin(model, centers, alpha, size_cap)
    delta = None if mu is None else choose_delta(d2p, alpha, mu)
    return DeltaChain(alpha, m, k, mu, d1p, d2, d2p, delta)


@dataclass(frozen=True)
class Link:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, **self.detail}


@dataclass(frozen=True)
class ReconstructionReport:
    chain: DeltaChain
    gh_bound: float
    preconditions: tuple
    links: tuple
    betti_target: tuple

    @property
    def in_regime(self) -> bool:
        return all(ok for _, ok, _ in self.preconditions)

    @property
    def ok(self) -> bool:
        return all(link.ok for link in self.links)

    def link(self, name: str) -> Link:
        for item in self.links:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "in_regime": self.in_regime,
            "chain": self.chain.to_dict(),
            "gh_bound": self.gh_bound,
            "preconditions": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.preconditions],
            "links": [link.to_dict() for link in self.links],
            "betti_target": list(self.betti_target),
        }


def _window(alpha: float, m: float, scales: ScaleSequence) -> bool:
    eps0 = alpha / 4
    return eps0 > scales.r1 and scales.r_inf > eps0 / m


def reconstruct(model: FiniteMetricSpace, target: FiniteMetricSpace, correspondence,
                centers: Sequence[int], alpha: float, scales: ScaleSequence, m: float = 2.0,
                k: float = DEFAULTS.k_divisor, dim_cap: int = DEFAULTS.dim_cap,
                size_cap: int = DEFAULTS.size_cap, reference: Optional[Sequence[int]] = None,
                union: Optional[PseudoMetricUnion] = None) -> ReconstructionReport:
    """Run the four links of the reconstruction chain and report each one.

    Preconditions (density of the centers, the scale window, the GH bound
    against the chosen delta) are recorded but do not stop the run, so
    out-of-regime inputs show which link breaks.
    """
    centers = sorted(int(c) for c in centers)
    chain = delta_chain(model, centers, alpha, m, k, size_cap)
    union = glue(model, target, correspondence) if union is None else union
    gh = gh_upper_bound(union)
    rho = model.meta.get("star_radius")
    dense = is_dense(model, centers, alpha / 2)
    pre = (
        ("alpha below half the star radius", rho is not None and alpha < rho / 2,
         {"alpha": alpha, "star_radius": rho}),
        ("centers alpha/2-dense", bool(dense), {"uncovered": dense.witness}),
        ("alpha not a critical radius", chain.mu is not None, {"mu": chain.mu}),
        ("scales in window", _window(alpha, m, scales),
         {"eps0": alpha / 4, "r1": scales.r1, "r_inf": scales.r_inf, "M": m}),
        ("GH bound below delta", chain.delta is not None and gh < chain.delta,
         {"gh_bound": gh, "delta": chain.delta}),
    )

    cover_x = build_cover(model, centers, alpha)
    cover_y = cover_in_union(union, centers, alpha, "right")
    nerve_x = nerve_complex(cover_x, size_cap)
    nerve_y = nerve_complex(cover_y, size_cap)
    top = min(dim_cap, size_cap - 1)

    if reference is None:
        reference = reference_betti(model.meta, top)
    b_nerve_x = tuple(betti(nerve_x, top))
    links = [Link("(i) model ~ Nerve(C)",
                  reference is not None and tuple(reference)[:top + 1] == b_nerve_x,
                  {"betti_model": list(reference) if reference is not None else None,
                   "betti_nerve": list(b_nerve_x), "cover_is_covering": cover_x.covering})]

    iso = nerve_iso_check(cover_x, cover_y, size_cap)
    inter = intersection_hausdorff(union, centers, alpha, size_cap)
    links.append(Link("(ii) Nerve(C) = Nerve(C_bar)", bool(iso) and inter.ok,
                      {"witness": list(iso.witness) if iso.witness else None,
                       "intersection_max_dH": inter.max_distance,
                       "delta1p_half": chain.delta1p / 2,
                       "dH_within_target": inter.max_distance < chain.delta1p / 2,
                       "one_sided_empty": [list(s) for s in inter.mismatches[:5]]}))

    # W: the selective Rips complex of each trace; two of them meet iff the traces do
    w_sets = [build_complex(target, scales, 0, vertices=sorted(el)).as_set()
              for el in cover_y.elements]
    w_nerve = set()
    for simplex in nerve_y:
        common = w_sets[simplex[0]]
        for j in simplex[1:]:
            common = common & w_sets[j]
        if common:
            w_nerve.add(simplex)
    same = w_nerve == nerve_y.as_set()
    links.append(Link("(iii) Nerve(C_bar) = Nerve(W)", same,
                      {"nerve_simplices": len(nerve_y)}))

    full = build_complex(target, scales, dim_cap + 1)
    b_target = tuple(betti(full, dim_cap))
    good = good_cover_check(cover_y, scales, dim_cap, size_cap)
    inside = simplices_in_elements(full, cover_y)
    leb = lebesgue_number(cover_y) if cover_y.covering else None
    b_nerve_y = tuple(betti(nerve_y, top))
    links.append(Link("(iv) Nerve(W) ~ sRips(Y)",
                      good.ok and bool(inside) and b_nerve_y == b_target[:top + 1],
                      {"good_cover": good.counts(),
                       "first_failure": good.first_failure.to_dict() if good.first_failure else None,
                       "simplices_in_elements": bool(inside),
                       "uncontained_simplex": list(inside.witness) if inside.witness else None,
                       "lebesgue_number": leb,
                       "betti_nerve": list(b_nerve_y), "betti_srips": list(b_target)}))
    return ReconstructionReport(chain, gh, pre, tuple(links), b_target)


def jittered_copy(model: FiniteMetricSpace, jitter: float, seed: Optional[int] = None) -> FiniteMetricSpace:
    """A perturbed copy of a circle or Euclidean sample, moved by at most ``jitter`` per point."""
    rng = np.random.default_rng(seed)
    meta = dict(model.meta)
    if meta.get("shape") == "circle":
        from .sampling import circle_distances

        radius = meta["radius"]
        theta = np.asarray(meta["angles"]) + rng.uniform(-jitter, jitter, model.n) / radius
        meta["angles"] = theta
        coords = radius * np.column_stack([np.cos(theta), np.sin(theta)])
        return FiniteMetricSpace(circle_distances(theta, radius, meta.get("geodesic", True)),
                                 coords=coords, meta=meta)
    if model.coords is None:
        raise ValueError("jittering needs coordinates or circle angles")
    from .sampling import euclidean_space

    step = rng.normal(size=model.coords.shape)
    step *= (jitter * rng.uniform(0, 1, (model.n, 1))) / np.maximum(
        np.linalg.norm(step, axis=1, keepdims=True), 1e-300)
    return euclidean_space(model.coords + step, meta)


@dataclass(frozen=True)
class CounterexampleReport:
    n: int
    scales: ScaleSequence
    points: tuple
    constraints: tuple
    counts: tuple
    betti: tuple
    top_simplices: int
    crushable: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "scales": list(self.scales.prefix),
            "points": list(self.points),
            "constraints": [{"i": i, "lhs": a, "rhs": b, "ok": ok} for i, a, b, ok in self.constraints],
            "counts": list(self.counts),
            "betti": list(self.betti),
            "top_simplices": self.top_simplices,
            "crushable": self.crushable,
        }


def default_counterexample_scales(n: int, r1: float = 1.0) -> ScaleSequence:
    """r_i = r_{i-1} / (i + 2), which keeps r_{i-1} > (i + 1) r_i."""
    values = [r1]
    for i in range(2, n + 2):
        values.append(values[-1] / (i + 2))
    return ScaleSequence(tuple(values))


def counterexample(n: int, scales: Optional[ScaleSequence] = None, r1: float = 1.0) -> CounterexampleReport:
    """n + 1 evenly spaced points on a line whose sRips is a hollow n-simplex.

    The spacing sits strictly between r_n and r_{n-1}/n, so every pair is
    farther apart than r_n while the whole set has diameter below r_{n-1}.
    Raises ValueError if r_{i-1} > (i + 1) r_i fails for some 2 <= i <= n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    scales = default_counterexample_scales(n, r1) if scales is None else scales
    constraints = []
    for i in range(2, n + 1):
        lhs, rhs = scales.r(i - 1), (i + 1) * scales.r(i)
        constraints.append((i, lhs, rhs, lhs > rhs))
    bad = [c for c in constraints if not c[3]]
    if bad:
        i, lhs, rhs, _ = bad[0]
        raise ValueError(f"scale constraint r_{i - 1} > {i + 1} r_{i} fails: {lhs} <= {rhs}")
    lo, hi = scales.r(n), scales.r(n - 1) / n if n > 1 else math.inf
    if n > 1 and not lo < hi:
        raise ValueError(f"no spacing fits between r_{n} = {lo} and r_{n - 1}/{n} = {hi}")
    spacing = (lo + hi) / 2 if n > 1 else 2 * lo
    points = tuple(float(j * spacing) for j in range(n + 1))
    x = np.asarray(points)
    space = build_space(np.abs(x[:, None] - x[None, :]), coords=x[:, None])
    complex_ = build_complex(space, scales, n)
    counts = tuple(complex_.counts() + [0] * (n + 1 - len(complex_.counts())))
    crush = greedy_crushable(space, scales)
    return CounterexampleReport(n, scales, points, tuple(constraints), counts,
                                tuple(betti(complex_, n)), counts[n], crush.success)
