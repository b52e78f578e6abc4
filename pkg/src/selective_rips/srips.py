"""Selective Rips complexes: membership, enumeration and filtrations.

A finite vertex set is a simplex for scales r_1 >= r_2 >= ... when, for
every i, it is a union of at most i sets of diameter below r_i. Only
r_1..r_{|sigma|-1} matter for a given simplex, so scale sequences are stored
as a finite prefix whose last entry repeats forever.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import DEFAULTS
from .metric import FiniteMetricSpace
from .partition import conflict_masks, k_colorable


class ScaleError(ValueError):
    pass


@dataclass(frozen=True)
class ScaleSequence:
    """Eventually constant non-increasing positive scales (r_1, r_2, ...)."""

    prefix: tuple

    def __post_init__(self):
        prefix = tuple(float(r) for r in self.prefix)
        if not prefix:
            raise ScaleError("scale sequence needs at least one value")
        if any(not (r > 0 and math.isfinite(r)) for r in prefix):
            raise ScaleError(f"scales must be positive and finite: {prefix}")
        for i in range(1, len(prefix)):
            if prefix[i] > prefix[i - 1]:
                raise ScaleError(f"scales must be non-increasing: r_{i} < r_{i + 1} in {prefix}")
        object.__setattr__(self, "prefix", prefix)

    @classmethod
    def parse(cls, text: str) -> "ScaleSequence":
        try:
            values = [float(v) for v in text.split(",") if v.strip()]
        except ValueError as exc:
            raise ScaleError(f"cannot parse scales {text!r}") from exc
        return cls(tuple(values))

    @classmethod
    def constant(cls, r: float) -> "ScaleSequence":
        return cls((r,))

    @property
    def tail(self) -> float:
        return self.prefix[-1]

    @property
    def r_inf(self) -> float:
        return self.prefix[-1]

    @property
    def r1(self) -> float:
        return self.prefix[0]

    def r(self, i: int) -> float:
        if i < 1:
            raise IndexError("scales are indexed from 1")
        return self.prefix[min(i, len(self.prefix)) - 1]

    def distinct_values(self) -> tuple:
        return tuple(sorted(set(self.prefix), reverse=True))

    def scaled(self, t: float) -> "ScaleSequence":
        return ScaleSequence(tuple(t * r for r in self.prefix))

    def extended(self, length: int) -> "ScaleSequence":
        """Same sequence with the tail written out up to ``length`` entries."""
        extra = max(0, length - len(self.prefix))
        return ScaleSequence(self.prefix + (self.tail,) * extra)

    def above(self, alpha: float) -> bool:
        """alpha > r~, i.e. alpha exceeds r_1."""
        return alpha > self.r1

    def below(self, beta: float) -> bool:
        """r~ > beta, i.e. the limit exceeds beta."""
        return self.r_inf > beta

    def __str__(self) -> str:
        return ",".join(repr(r) for r in self.prefix)


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed set of sorted vertex tuples, grouped by dimension."""

    n_vertices: int
    simplices: tuple  # simplices[d] is a sorted tuple of (d+1)-tuples

    @classmethod
    def from_simplices(cls, n_vertices: int, simplices: Iterable[Sequence[int]],
                       close: bool = False) -> "SimplicialComplex":
        by_dim: dict[int, set] = {}
        for s in simplices:
            s = tuple(sorted(int(v) for v in s))
            if len(set(s)) != len(s) or not s:
                raise ValueError(f"bad simplex {s}")
            by_dim.setdefault(len(s) - 1, set()).add(s)
            if close:
                for k in range(1, len(s)):
                    for face in itertools.combinations(s, k):
                        by_dim.setdefault(k - 1, set()).add(face)
        top = max(by_dim, default=-1)
        return cls(n_vertices, tuple(tuple(sorted(by_dim.get(d, ()))) for d in range(top + 1)))

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def __iter__(self) -> Iterator[tuple]:
        for layer in self.simplices:
            yield from layer

    def __len__(self) -> int:
        return sum(self.counts())

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(simplex))
        d = len(s) - 1
        return 0 <= d <= self.dim and s in self._sets()[d]

    def _sets(self):
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = [frozenset(layer) for layer in self.simplices]
            object.__setattr__(self, "_cache", cache)
        return cache

    def as_set(self) -> frozenset:
        return frozenset(self)

    def skeleton(self, dim: int) -> "SimplicialComplex":
        return SimplicialComplex(self.n_vertices, self.simplices[: dim + 1])

    def relabel(self, mapping: Sequence[int], n_vertices: int) -> "SimplicialComplex":
        return SimplicialComplex.from_simplices(
            n_vertices, (tuple(mapping[v] for v in s) for s in self))

    def is_face_closed(self) -> bool:
        sets = self._sets()
        for d in range(1, self.dim + 1):
            for s in self.simplices[d]:
                for face in itertools.combinations(s, d):
                    if face not in sets[d - 1]:
                        return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts()))


def _as_block(space: FiniteMetricSpace, sigma: Sequence[int]) -> np.ndarray:
    idx = np.asarray(sigma, dtype=np.int64)
    return space.dist[np.ix_(idx, idx)]


def _check_size(m: int) -> None:
    if m > DEFAULTS.max_simplex_size:
        raise ValueError(f"vertex sets above {DEFAULTS.max_simplex_size} points are "
                         "not handled by the exact partition solver")


def block_admits_partition(block: np.ndarray, i: int, bound: float, strict: bool = True) -> bool:
    m = block.shape[0]
    if i >= m:
        return True
    diam = block.max()
    if (diam < bound) if strict else (diam <= bound):
        return True
    if i == 1:
        return False
    _check_size(m)
    return k_colorable(conflict_masks(block, bound, strict), i)


def admits_partition(space: FiniteMetricSpace, sigma: Sequence[int], i: int,
                     bound: float, strict: bool = True) -> bool:
    """Can ``sigma`` be split into at most ``i`` parts of diameter < bound?

    With ``strict=False`` the parts need diameter <= bound.
    """
    if not sigma:
        raise ValueError("sigma must be non-empty")
    if i < 1:
        raise ValueError("i must be >= 1")
    return block_admits_partition(_as_block(space, sigma), i, bound, strict)


def block_is_simplex(block: np.ndarray, scales: ScaleSequence, strict: bool = True) -> bool:
    m = block.shape[0]
    if m <= 1:
        return True
    diam = float(block.max())
    for i in range(1, m):
        r = scales.r(i)
        if (diam < r) if strict else (diam <= r):
            continue
        if not block_admits_partition(block, i, r, strict):
            return False
    return True


def is_simplex(space: FiniteMetricSpace, sigma: Sequence[int], scales: ScaleSequence,
               strict: bool = True) -> bool:
    """Selective Rips membership (``strict=False`` gives the closed variant)."""
    if not sigma:
        raise ValueError("sigma must be non-empty")
    return block_is_simplex(_as_block(space, sigma), scales, strict)


def _graph(space: FiniteMetricSpace, r: float, strict: bool, active=None) -> list[np.ndarray]:
    adj = space.dist < r if strict else space.dist <= r
    np.fill_diagonal(adj, False)
    if active is not None:
        adj = adj & active[None, :] & active[:, None]
    return [np.flatnonzero(row[v + 1:]) + v + 1 for v, row in enumerate(adj)]


def _expand(space: FiniteMetricSpace, accept, dim_cap: int, r1: float, strict: bool,
            vertices=None) -> list[list[tuple]]:
    """Grow cliques of the r_1-graph, keeping those ``accept`` approves.

    ``accept(sigma)`` is only called on sets whose facets were all accepted
    through the growth path, which is enough since membership is face-closed.
    """
    n = space.n
    active = None
    if vertices is not None:
        active = np.zeros(n, dtype=bool)
        active[list(vertices)] = True
    up = _graph(space, r1, strict, active)
    verts = range(n) if vertices is None else sorted(vertices)
    layers: list[list[tuple]] = [[(v,) for v in verts]]
    frontier = [((v,), up[v]) for v in verts]
    for _ in range(dim_cap):
        nxt_layer, nxt_frontier = [], []
        for sigma, common in frontier:
            for w in common:
                tau = sigma + (int(w),)
                if accept(tau):
                    nxt_layer.append(tau)
                    nxt_frontier.append((tau, np.intersect1d(common, up[w], assume_unique=True)))
        if not nxt_layer:
            break
        layers.append(nxt_layer)
        frontier = nxt_frontier
    return layers


def build_complex(space: FiniteMetricSpace, scales: ScaleSequence, dim_cap: int = DEFAULTS.dim_cap,
                  vertices: Iterable[int] | None = None, strict: bool = True) -> SimplicialComplex:
    """All simplices of sRips(space; scales) of dimension <= dim_cap.

    ``vertices`` restricts to the full subcomplex on a vertex subset; vertex
    labels stay those of ``space``.
    """
    if dim_cap < 0:
        raise ValueError("dim_cap must be >= 0")
    _check_size(dim_cap + 1)
    dist = space.dist

    r1 = scales.r1

    def accept(tau):
        # every r_1-clique passes when all scales it is tested against equal r_1
        if scales.r(len(tau) - 1) == r1:
            return True
        return block_is_simplex(dist[np.ix_(tau, tau)], scales, strict)

    layers = _expand(space, accept, dim_cap, r1, strict, vertices)
    return SimplicialComplex(space.n, tuple(tuple(sorted(layer)) for layer in layers))


def build_rips(space: FiniteMetricSpace, r: float, dim_cap: int = DEFAULTS.dim_cap) -> SimplicialComplex:
    return build_complex(space, ScaleSequence.constant(r), dim_cap)


def cluster_width(space: FiniteMetricSpace, sigma: Sequence[int], i: int) -> float:
    """Smallest d such that sigma splits into <= i parts of diameter <= d."""
    return block_cluster_width(_as_block(space, sigma), i)


def block_cluster_width(block: np.ndarray, i: int) -> float:
    m = block.shape[0]
    if not 1 <= i < m:
        raise ValueError(f"need 1 <= i < |sigma|, got i={i}, |sigma|={m}")
    values = np.unique(block[np.triu_indices(m, 1)])
    if i == 1:
        return float(values[-1])
    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if block_admits_partition(block, i, values[mid], strict=False):
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices with birth values; the sublevel set at t is the closed
    selective Rips complex at scales t * profile."""

    space: FiniteMetricSpace
    profile: ScaleSequence
    simplices: tuple  # (simplex, birth) in filtration order
    dim_cap: int

    def ordered(self) -> tuple:
        return self.simplices

    def birth(self, simplex) -> float:
        index = self.__dict__.get("_index")
        if index is None:
            index = {s: b for s, b in self.simplices}
            object.__setattr__(self, "_index", index)
        return index[tuple(sorted(simplex))]

    def sublevel(self, t: float) -> SimplicialComplex:
        return SimplicialComplex.from_simplices(
            self.space.n, (s for s, b in self.simplices if b <= t))

    def check_monotone(self) -> None:
        births = {s: b for s, b in self.simplices}
        for s, b in self.simplices:
            if len(s) > 1:
                for face in itertools.combinations(s, len(s) - 1):
                    if births.get(face, math.inf) > b:
                        raise ValueError(f"face {face} of {s} is born after it")


def filtration_order(items: Iterable[tuple[tuple, float]]) -> tuple:
    return tuple(sorted(items, key=lambda sb: (sb[1], len(sb[0]), sb[0])))


def simplex_birth(block: np.ndarray, profile: ScaleSequence) -> float:
    m = block.shape[0]
    if m == 1:
        return 0.0
    widths = [(block_cluster_width(block, i), profile.r(i)) for i in range(1, m)]
    b = max(w / p for w, p in widths)
    # round up until b * p_i >= w_i holds in floating point, so births are attained
    while any(b * p < w for w, p in widths):
        b = math.nextafter(b, math.inf)
    return b


def build_filtration(space: FiniteMetricSpace, profile: ScaleSequence,
                     dim_cap: int = DEFAULTS.dim_cap, max_birth: float = math.inf) -> Filtration:
    """b(sigma) = max_i w_i(sigma) / p_i, truncated to births <= max_birth."""
    if abs(profile.r1 - 1.0) > 1e-12:
        raise ScaleError("a filtration profile must start with 1")
    if dim_cap < 0:
        raise ValueError("dim_cap must be >= 0")
    _check_size(dim_cap + 1)
    dist = space.dist
    births: dict[tuple, float] = {}

    def accept(tau):
        b = simplex_birth(dist[np.ix_(tau, tau)], profile)
        if b <= max_birth:
            births[tau] = b
            return True
        return False

    r1 = max_birth if math.isfinite(max_birth) else float(dist.max()) + 1.0
    layers = _expand(space, accept, dim_cap, r1, strict=False)
    items = [((v,), 0.0) for (v,) in layers[0]]
    items += list(births.items())
    return Filtration(space, profile, filtration_order(items), dim_cap)
