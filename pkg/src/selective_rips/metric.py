"""Finite metric spaces, balls, neighborhoods and Hausdorff distance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .config import DEFAULTS


class MetricError(ValueError):
    """Invalid distance data; ``witness`` holds the offending indices."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = tuple(int(w) for w in witness)


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with an optional witness."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def _first(mask: np.ndarray) -> tuple:
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0])


def validate_distances(dist: np.ndarray, tol: float = DEFAULTS.tau_tri) -> None:
    """Raise MetricError unless ``dist`` is a (pseudo-)metric up to ``tol``.

    Witnesses are the first violation in row-major order. A triangle
    violation is reported as ``(i, k, j)`` with d(i,k) > d(i,j) + d(j,k).
    """
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise MetricError(f"distance matrix must be square, got shape {dist.shape}")
    if dist.shape[0] == 0:
        raise MetricError("distance matrix is empty")
    if not np.all(np.isfinite(dist)):
        w = _first(~np.isfinite(dist))
        raise MetricError(f"non-finite entry at {w}", w)
    diag = np.diag(dist) != 0
    if diag.any():
        i = int(np.argmax(diag))
        raise MetricError(f"nonzero diagonal entry at ({i}, {i})", (i, i))
    if (dist < 0).any():
        w = _first(dist < 0)
        raise MetricError(f"negative entry at {w}", w)
    asym = np.abs(dist - dist.T) > tol
    if asym.any():
        w = _first(asym)
        raise MetricError(f"asymmetric entries at {w}", w)
    n = dist.shape[0]
    best = np.full((n, n), np.inf)
    via = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        detour = dist[:, j, None] + dist[None, j, :]
        better = detour < best
        best[better] = detour[better]
        via[better] = j
    bad = dist > best + tol
    if bad.any():
        i, k = _first(bad)
        j = int(via[i, k])
        raise MetricError(
            f"triangle inequality violated: d({i},{k})={dist[i, k]} > "
            f"d({i},{j}) + d({j},{k}) = {best[i, k]}",
            (i, k, j),
        )


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """n points with a validated symmetric distance matrix.

    ``coords`` are ambient coordinates when the space came from a sampler;
    ``meta`` carries sampler metadata such as the star radius.
    """

    dist: np.ndarray
    labels: Optional[tuple] = None
    coords: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)
    tol: float = DEFAULTS.tau_tri
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        dist = np.array(self.dist, dtype=float)
        if self.check:
            validate_distances(dist, self.tol)
        # exact symmetry, even when the input was symmetric only up to tol
        if not np.array_equal(dist, dist.T):
            upper = np.triu(dist)
            dist = upper + upper.T
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            if coords.ndim == 1:
                coords = coords[:, None]
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.n:
                raise MetricError("label count does not match point count")

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n

    def diameter(self, indices: Optional[Iterable[int]] = None) -> float:
        if indices is None:
            return float(self.dist.max())
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size == 0:
            return 0.0
        return float(self.dist[np.ix_(idx, idx)].max())

    def subspace(self, indices: Iterable[int]) -> "FiniteMetricSpace":
        """Restriction to ``indices`` (in the given order); no re-validation."""
        idx = np.fromiter(indices, dtype=np.int64)
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        coords = None if self.coords is None else self.coords[idx]
        meta = dict(self.meta)
        meta["parent_indices"] = tuple(int(i) for i in idx)
        return FiniteMetricSpace(
            self.dist[np.ix_(idx, idx)], labels, coords, meta, self.tol, check=False
        )


def build_space(dist_matrix, labels=None, coords=None, meta=None,
                tol: float = DEFAULTS.tau_tri) -> FiniteMetricSpace:
    """Validate a square distance matrix and wrap it."""
    dist = np.asarray(dist_matrix, dtype=float)
    return FiniteMetricSpace(dist, labels, coords, dict(meta or {}), tol)


def ball_mask(space: FiniteMetricSpace, center: int, r: float) -> np.ndarray:
    if not r > 0:
        raise ValueError(f"ball radius must be positive, got {r}")
    return space.dist[center] < r


def ball(space: FiniteMetricSpace, center: int, r: float) -> frozenset:
    """Open ball ``{j : d(center, j) < r}``."""
    return frozenset(np.flatnonzero(ball_mask(space, center, r)).tolist())


def neighborhood(space: FiniteMetricSpace, subset: Iterable[int], q: float) -> frozenset:
    """Open q-neighborhood: points within q of *some* point of ``subset``."""
    idx = list(subset)
    if not idx:
        return frozenset()
    near = (space.dist[idx] < q).any(axis=0)
    return frozenset(np.flatnonzero(near).tolist())


def common_ball(space: FiniteMetricSpace, subset: Iterable[int], q: float) -> frozenset:
    """Points within q of *every* point of ``subset`` (intersection of balls)."""
    idx = list(subset)
    if not idx:
        return frozenset(range(space.n))
    near = (space.dist[idx] < q).all(axis=0)
    return frozenset(np.flatnonzero(near).tolist())


def hausdorff(space: FiniteMetricSpace, a: Iterable[int], b: Iterable[int]) -> float:
    a, b = list(a), list(b)
    if not a or not b:
        raise ValueError("Hausdorff distance needs non-empty sets")
    block = space.dist[np.ix_(a, b)]
    return float(max(block.min(axis=1).max(), block.min(axis=0).max()))


def is_dense(space: FiniteMetricSpace, subset: Iterable[int], delta: float) -> Verdict:
    """True iff every point lies strictly within ``delta`` of ``subset``.

    On failure the witness is the first uncovered point.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    idx = list(subset)
    if not idx:
        return Verdict(False, 0)
    covered = (space.dist[idx] < delta).any(axis=0)
    if covered.all():
        return Verdict(True)
    return Verdict(False, int(np.argmin(covered)))


def eccentricity(space: FiniteMetricSpace, indices: Optional[Iterable[int]] = None) -> np.ndarray:
    if indices is None:
        return space.dist.max(axis=1)
    idx = list(indices)
    return space.dist[np.ix_(idx, idx)].max(axis=1)


def one_center(space: FiniteMetricSpace) -> int:
    """Index of minimal eccentricity, lowest index on ties."""
    return int(np.argmin(eccentricity(space)))
