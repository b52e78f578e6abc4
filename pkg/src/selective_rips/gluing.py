"""Gluing two finite metric spaces along a correspondence.

The result is a pseudo-metric on the disjoint union that restricts to the
given metrics on each side; it makes Hausdorff comparisons between the two
sides concrete and gives an upper bound on their Gromov-Hausdorff distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import DEFAULTS
from .metric import FiniteMetricSpace, MetricError, validate_distances


@dataclass(frozen=True, eq=False)
class PseudoMetricUnion:
    left: FiniteMetricSpace
    right: FiniteMetricSpace
    cross: np.ndarray
    declared_bound: float
    slack: float = 0.0

    def __post_init__(self):
        cross = np.array(self.cross, dtype=float)
        if cross.shape != (self.left.n, self.right.n):
            raise MetricError(f"cross block has shape {cross.shape}, "
                              f"expected {(self.left.n, self.right.n)}")
        cross.setflags(write=False)
        object.__setattr__(self, "cross", cross)

    @property
    def n_left(self) -> int:
        return self.left.n

    def full_matrix(self) -> np.ndarray:
        """Distances on the disjoint union, left points first."""
        return np.block([[self.left.dist, self.cross], [self.cross.T, self.right.dist]])

    def validate(self, tol: float = DEFAULTS.tau_tri) -> None:
        validate_distances(self.full_matrix(), tol)
        b = self.declared_bound + tol
        if (self.cross.min(axis=1) > b).any():
            i = int(np.argmax(self.cross.min(axis=1) > b))
            raise MetricError(f"left point {i} is farther than the declared bound", (i,))
        if (self.cross.min(axis=0) > b).any():
            j = int(np.argmax(self.cross.min(axis=0) > b))
            raise MetricError(f"right point {j} is farther than the declared bound", (j,))

    def distance_from_point(self, point: np.ndarray) -> np.ndarray:
        """Extend d' to an ambient point of the left side's coordinate space.

        For an ambient point p, d'(p, y) = min_x |p - x| + cross[x, y]; this is
        the largest extension consistent with the union's pseudo-metric.
        """
        if self.left.coords is None:
            raise ValueError("left side carries no coordinates")
        p = np.asarray(point, dtype=float).reshape(1, -1)
        to_left = np.linalg.norm(self.left.coords - p, axis=1)
        return (to_left[:, None] + self.cross).min(axis=0)


def distortion(left: FiniteMetricSpace, right: FiniteMetricSpace, pairs) -> float:
    """max |d_L(x, x') - d_R(y, y')| over pairs of correspondence pairs."""
    pairs = np.asarray(sorted(set(map(tuple, pairs))), dtype=np.int64)
    a, b = pairs[:, 0], pairs[:, 1]
    return float(np.abs(left.dist[np.ix_(a, a)] - right.dist[np.ix_(b, b)]).max())


def glue(left: FiniteMetricSpace, right: FiniteMetricSpace,
         correspondence: Iterable[tuple[int, int]], slack: float | None = None,
         tol: float = DEFAULTS.tau_tri) -> PseudoMetricUnion:
    """cross[x, y] = min over pairs (a, b) of d_L(x, a) + slack + d_R(b, y).

    ``slack`` defaults to half the distortion, the least value keeping the
    triangle inequality; smaller values are rejected.
    """
    pairs = sorted(set((int(a), int(b)) for a, b in correspondence))
    if not pairs:
        raise ValueError("empty correspondence")
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    if set(a.tolist()) != set(range(left.n)):
        missing = min(set(range(left.n)) - set(a.tolist()))
        raise ValueError(f"correspondence misses left point {missing}")
    if set(b.tolist()) != set(range(right.n)):
        missing = min(set(range(right.n)) - set(b.tolist()))
        raise ValueError(f"correspondence misses right point {missing}")
    half = distortion(left, right, pairs) / 2
    if slack is None:
        slack = half
    if slack < half - tol:
        raise ValueError(f"slack {slack} is below half the distortion ({half})")
    cross = np.full((left.n, right.n), np.inf)
    for ai, bi in pairs:
        np.minimum(cross, left.dist[:, ai, None] + slack + right.dist[None, bi, :], out=cross)
    union = PseudoMetricUnion(left, right, cross, float(slack), float(slack))
    union.validate(tol)
    return union


def gh_upper_bound(union: PseudoMetricUnion) -> float:
    """Hausdorff distance between the two sides inside the union."""
    return float(max(union.cross.min(axis=1).max(), union.cross.min(axis=0).max()))


def nearest_correspondence(cross_dist: np.ndarray) -> list[tuple[int, int]]:
    """Each point paired with its nearest point on the other side.

    ``cross_dist`` is any left-by-right distance table (typically from a
    shared embedding); ties go to the lowest index.
    """
    cross_dist = np.asarray(cross_dist, dtype=float)
    pairs = {(i, int(np.argmin(cross_dist[i]))) for i in range(cross_dist.shape[0])}
    pairs |= {(int(np.argmin(cross_dist[:, j])), j) for j in range(cross_dist.shape[1])}
    return sorted(pairs)


def coordinate_cross(left: FiniteMetricSpace, right: FiniteMetricSpace) -> np.ndarray:
    """Euclidean distances between the two sides' coordinates."""
    if left.coords is None or right.coords is None:
        raise ValueError("both sides need coordinates")
    return np.linalg.norm(left.coords[:, None, :] - right.coords[None, :, :], axis=-1)


def identity_correspondence(n: int) -> list[tuple[int, int]]:
    return [(i, i) for i in range(n)]
