"""Covers by open-ball traces, their nerves, and perturbation margins.

A cover element is the trace of an open ball B(c, alpha) on one finite
space. Elements are stored as index sets and as Python-int bitsets, so
intersecting k elements costs k ANDs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional, Sequence

import numpy as np

from .config import DEFAULTS
from .crushing import greedy_crushable
from .gluing import PseudoMetricUnion
from .homology import betti
from .metric import FiniteMetricSpace, Verdict
from .srips import ScaleSequence, SimplicialComplex, build_complex


def _bits(mask: np.ndarray) -> int:
    out = 0
    for i in np.flatnonzero(mask):
        out |= 1 << int(i)
    return out


def _members(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


@dataclass(frozen=True)
class Cover:
    """Ball traces B(c, alpha) on ``space``, one element per center.

    ``center_dist[k, x]`` is the distance from the k-th center to point x of
    ``space``; for the right side of a union these are cross distances, and
    the centers themselves live on the left side.
    """

    space: FiniteMetricSpace
    centers: tuple
    alpha: float
    center_dist: np.ndarray = field(repr=False)
    elements: tuple = field(repr=False)
    covering: bool = True
    side: str = "self"

    @property
    def masks(self) -> tuple:
        return tuple(_bits(self.center_dist[k] < self.alpha) for k in range(len(self.centers)))

    def __len__(self) -> int:
        return len(self.centers)

    def uncovered(self) -> list[int]:
        hit = (self.center_dist < self.alpha).any(axis=0)
        return [int(i) for i in np.flatnonzero(~hit)]

    def intersection(self, sigma: Sequence[int]) -> list[int]:
        """Points in every element indexed by positions ``sigma``."""
        keep = np.all(self.center_dist[list(sigma)] < self.alpha, axis=0)
        return [int(i) for i in np.flatnonzero(keep)]


def _make_cover(space, centers, alpha, center_dist, side) -> Cover:
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    centers = tuple(int(c) for c in centers)
    if not centers:
        raise ValueError("centers must be non-empty")
    center_dist = np.asarray(center_dist, dtype=float)
    center_dist.setflags(write=False)
    inside = center_dist < alpha
    elements = tuple(frozenset(int(i) for i in np.flatnonzero(row)) for row in inside)
    covering = bool(inside.any(axis=0).all())
    return Cover(space, centers, float(alpha), center_dist, elements, covering, side)


def build_cover(space: FiniteMetricSpace, centers: Sequence[int], alpha: float) -> Cover:
    """Open alpha-balls around ``centers`` (indices into ``space``)."""
    return _make_cover(space, centers, alpha, space.dist[list(centers)], "self")


def cover_in_union(union: PseudoMetricUnion, centers: Sequence[int], alpha: float,
                   side: str = "right") -> Cover:
    """Traces B'(c, alpha) on one side of a union, centers on the left side."""
    centers = list(centers)
    if side == "left":
        return _make_cover(union.left, centers, alpha, union.left.dist[centers], "left")
    if side == "right":
        return _make_cover(union.right, centers, alpha, union.cross[centers], "right")
    raise ValueError("side must be 'left' or 'right'")


def _nonempty_subsets(masks: Sequence[int], size_cap: int) -> Iterator[tuple[tuple, int]]:
    """Subsets (as position tuples) with a non-empty intersection, in lex order."""
    k = len(masks)

    def walk(sigma, acc, start):
        for j in range(start, k):
            inter = acc & masks[j] if sigma else masks[j]
            if inter:
                tau = sigma + (j,)
                yield tau, inter
                if len(tau) < size_cap:
                    yield from walk(tau, inter, j + 1)

    yield from walk((), 0, 0)


def nerve_complex(cover: Cover, size_cap: int = DEFAULTS.size_cap) -> SimplicialComplex:
    """Nerve on the center positions 0..k-1, simplices of at most ``size_cap`` vertices."""
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    simplices = [sigma for sigma, _ in _nonempty_subsets(cover.masks, size_cap)]
    return SimplicialComplex.from_simplices(len(cover), simplices)


def critical_radii(space: FiniteMetricSpace, centers: Sequence[int],
                   size_cap: int = DEFAULTS.size_cap) -> dict[tuple, float]:
    """p_sigma = min_z max_{x in sigma} d(z, x) for every sigma of at most ``size_cap`` centers.

    Keys are sorted tuples of center indices. On a finite space the open
    balls of radius r around sigma share a point exactly when r > p_sigma.
    """
    if size_cap < 2:
        raise ValueError("size_cap must be >= 2")
    centers = sorted(int(c) for c in centers)
    dist = space.dist
    out: dict[tuple, float] = {}

    def walk(sigma, running, start):
        for j in range(start, len(centers)):
            c = centers[j]
            nxt = dist[c] if running is None else np.maximum(running, dist[c])
            tau = sigma + (c,)
            out[tau] = float(nxt.min())
            if len(tau) < size_cap:
                walk(tau, nxt, j + 1)

    walk((), None, 0)
    return out


def mu_margin(space: FiniteMetricSpace, centers: Sequence[int], alpha: float,
              size_cap: int = DEFAULTS.size_cap, radii: Optional[dict] = None) -> Optional[float]:
    """Half the gap from alpha to the next critical radius above it.

    Returns None when alpha is itself a critical radius and ``math.inf`` when
    no critical radius exceeds alpha.
    """
    radii = critical_radii(space, centers, size_cap) if radii is None else radii
    values = set(radii.values())
    if alpha in values:
        return None
    above = [p for p in values if p > alpha]
    if not above:
        return math.inf
    return (min(above) - alpha) / 2


def margin_holds(space: FiniteMetricSpace, centers: Sequence[int], alpha: float, mu: float,
                 size_cap: int = DEFAULTS.size_cap) -> Verdict:
    """Check directly that no sigma changes emptiness between radius alpha and alpha + mu."""
    centers = sorted(int(c) for c in centers)
    dist = space.dist
    for size in range(1, size_cap + 1):
        for sigma in combinations(centers, size):
            far = dist[list(sigma)].max(axis=0)
            if bool((far < alpha).any()) != bool((far < alpha + mu).any()):
                return Verdict(False, sigma)
    return Verdict(True)


@dataclass(frozen=True)
class IntersectionReport:
    """Per-sigma Hausdorff distances between left and right intersections."""

    distances: dict
    mismatches: tuple
    max_distance: float

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "records": [{"sigma": list(s), "d_H": d} for s, d in sorted(self.distances.items())],
            "mismatches": [list(s) for s in self.mismatches],
            "max": self.max_distance,
            "first_mismatch": list(self.mismatches[0]) if self.mismatches else None,
        }


def intersection_hausdorff(union: PseudoMetricUnion, centers: Sequence[int], alpha: float,
                           size_cap: int = DEFAULTS.size_cap) -> IntersectionReport:
    """Compare intersections of alpha-balls on the left with their traces on the right.

    Distances are measured inside the union. A sigma with exactly one empty
    side is a mismatch; sigmas empty on both sides are skipped, and so are
    all their supersets.
    """
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    centers = sorted(int(c) for c in centers)
    left_d = union.left.dist[centers] < alpha
    right_d = union.cross[centers] < alpha
    cross = union.cross
    distances: dict[tuple, float] = {}
    mismatches: list[tuple] = []

    def walk(sigma, lmask, rmask, start):
        for j in range(start, len(centers)):
            lm = left_d[j] if lmask is None else lmask & left_d[j]
            rm = right_d[j] if rmask is None else rmask & right_d[j]
            tau = sigma + (centers[j],)
            has_l, has_r = bool(lm.any()), bool(rm.any())
            if not has_l and not has_r:
                continue
            if has_l != has_r:
                mismatches.append(tau)
            else:
                block = cross[np.ix_(lm, rm)]
                distances[tau] = float(max(block.min(axis=1).max(), block.min(axis=0).max()))
            if len(tau) < size_cap:
                walk(tau, lm, rm, j + 1)

    walk((), None, None, 0)
    top = max(distances.values(), default=0.0)
    return IntersectionReport(dict(sorted(distances.items())), tuple(sorted(mismatches)), top)


def nerve_iso_check(cover_left: Cover, cover_right: Cover,
                    size_cap: int = DEFAULTS.size_cap) -> Verdict:
    """Whether the center bijection is an isomorphism of nerves.

    The witness is the first sigma (as center indices) in one nerve but not
    the other.
    """
    if cover_left.centers != cover_right.centers:
        raise ValueError("covers must share the same center list")
    left = nerve_complex(cover_left, size_cap).as_set()
    right = nerve_complex(cover_right, size_cap).as_set()
    diff = sorted(left ^ right, key=lambda s: (len(s), s))
    if diff:
        return Verdict(False, tuple(cover_left.centers[i] for i in diff[0]))
    return Verdict(True)


VERDICTS = ("crushable", "homology-trivial", "suspect")


@dataclass(frozen=True)
class GoodCoverRecord:
    sigma: tuple
    size: int
    verdict: str
    betti: tuple
    crush_steps: int
    identity_holds: bool

    def to_dict(self) -> dict:
        return {"sigma": list(self.sigma), "size": self.size, "verdict": self.verdict,
                "betti": list(self.betti), "crush_steps": self.crush_steps,
                "identity_holds": self.identity_holds}


@dataclass(frozen=True)
class GoodCoverReport:
    records: tuple

    @property
    def ok(self) -> bool:
        return all(r.verdict != "suspect" and r.identity_holds for r in self.records)

    @property
    def first_failure(self) -> Optional[GoodCoverRecord]:
        for r in self.records:
            if r.verdict == "suspect" or not r.identity_holds:
                return r
        return None

    def counts(self) -> dict:
        return {v: sum(r.verdict == v for r in self.records) for v in VERDICTS}

    def to_dict(self) -> dict:
        bad = self.first_failure
        return {"ok": self.ok, "counts": self.counts(),
                "first_failure": bad.to_dict() if bad else None,
                "records": [r.to_dict() for r in self.records]}


def good_cover_check(cover: Cover, scales: ScaleSequence, dim_cap: int = DEFAULTS.dim_cap,
                     size_cap: int = DEFAULTS.size_cap) -> GoodCoverReport:
    """Three-valued contractibility proxy for every non-empty intersection.

    Each intersection S is tried with farthest-first crushing (success proves
    sRips(S) contractible); otherwise its Betti numbers up to ``dim_cap``
    decide between "homology-trivial" and "suspect". Each record also checks
    that sRips of the intersection equals the intersection of the element
    complexes.
    """
    space = cover.space
    element_sets: dict[int, frozenset] = {}

    def element_complex(j):
        if j not in element_sets:
            members = sorted(cover.elements[j])
            element_sets[j] = build_complex(space, scales, dim_cap + 1, vertices=members).as_set()
        return element_sets[j]

    trivial = tuple([1] + [0] * dim_cap)
    records = []
    for sigma, bits in _nonempty_subsets(cover.masks, size_cap):
        members = _members(bits)
        sub = space.subspace(members)
        crush = greedy_crushable(sub, scales)
        local = build_complex(space, scales, dim_cap + 1, vertices=members)
        b = tuple(betti(local, dim_cap))
        if crush.success:
            verdict = "crushable"
        elif b == trivial:
            verdict = "homology-trivial"
        else:
            verdict = "suspect"
        common = element_complex(sigma[0])
        for j in sigma[1:]:
            common = common & element_complex(j)
        records.append(GoodCoverRecord(tuple(cover.centers[j] for j in sigma), len(members),
                                       verdict, b, len(crush.steps), common == local.as_set()))
    return GoodCoverReport(tuple(records))


def lebesgue_number(cover: Cover) -> float:
    """min over points x of max over centers c of (alpha - d(x, c))."""
    if not cover.covering:
        raise ValueError(f"not a cover: point {cover.uncovered()[0]} lies in no element")
    return float((cover.alpha - cover.center_dist).max(axis=0).min())


def simplices_in_elements(complex_: SimplicialComplex, cover: Cover) -> Verdict:
    """Every simplex lies inside some cover element; the witness is the first that does not."""
    masks = cover.masks
    for simplex in complex_:
        bits = 0
        for v in simplex:
            bits |= 1 << v
        if not any(bits & m == bits for m in masks):
            return Verdict(False, simplex)
    return Verdict(True)
