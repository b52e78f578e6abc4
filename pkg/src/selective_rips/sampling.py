"""Closed-form samplers for flat and constant-curvature exemplars.

Every sampler returns a FiniteMetricSpace whose distances are exact
geodesic distances of the exemplar, with coordinates and metadata
(``shape``, ``star_radius``, shape parameters) attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .config import DEFAULTS
from .metric import FiniteMetricSpace

SHAPES = ("interval", "disk", "circle", "flat_torus")
MODES = ("grid", "uniform", "jittered")


@dataclass(frozen=True)
class SampleSpec:
    """What to sample.

    ``count`` is the number of points, except for grids on the disk (lattice
    steps per radius) and the flat torus (points per axis).
    """

    shape: str
    count: int
    mode: str = "grid"
    seed: int | None = None
    jitter: float = 0.0
    length: float = 1.0
    radius: float = 1.0
    dim: int = 2
    geodesic: bool = True
    sides: tuple = (1.0, 1.0)

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.jitter < 0:
            raise ValueError("jitter must be non-negative")
        if min(self.length, self.radius) <= 0 or self.dim < 1:
            raise ValueError("geometric parameters must be positive")
        if not self.sides or min(self.sides) <= 0:
            raise ValueError("torus sides must be positive")


def _check_size(n: int) -> None:
    if n * n > DEFAULTS.max_matrix_entries:
        gb = n * n * 8 / 1e9
        raise MemoryError(
            f"{n} points need a dense {n}x{n} distance matrix (~{gb:.1f} GB), "
            f"above the configured limit of {DEFAULTS.max_matrix_entries} entries"
        )


def _euclidean(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def euclidean_space(points, meta=None) -> FiniteMetricSpace:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    _check_size(len(points))
    return FiniteMetricSpace(_euclidean(points), coords=points, meta=dict(meta or {}))


def circle_distances(angles: np.ndarray, radius: float, geodesic: bool = True) -> np.ndarray:
    delta = np.abs(angles[:, None] - angles[None, :]) % (2 * math.pi)
    delta = np.minimum(delta, 2 * math.pi - delta)
    if geodesic:
        return radius * delta
    return 2 * radius * np.sin(delta / 2)


def torus_distances(points: np.ndarray, sides) -> np.ndarray:
    sides = np.asarray(sides, dtype=float)
    diff = np.abs(points[:, None, :] - points[None, :, :]) % sides
    diff = np.minimum(diff, sides - diff)
    return np.sqrt((diff * diff).sum(axis=-1))


def _rng(spec: SampleSpec) -> np.random.Generator:
    return np.random.default_rng(spec.seed)


def _sample_interval(spec: SampleSpec) -> FiniteMetricSpace:
    if spec.mode == "uniform":
        x = np.sort(_rng(spec).uniform(0, spec.length, spec.count))
    else:
        x = np.linspace(0, spec.length, spec.count) if spec.count > 1 else np.zeros(1)
        if spec.mode == "jittered":
            x = np.clip(x + _rng(spec).uniform(-spec.jitter, spec.jitter, x.size), 0, spec.length)
    _check_size(x.size)
    dist = np.abs(x[:, None] - x[None, :])
    meta = {"shape": "interval", "length": spec.length, "star_radius": math.inf,
            "center": np.array([spec.length / 2])}
    return FiniteMetricSpace(dist, coords=x[:, None], meta=meta)


def _sample_circle(spec: SampleSpec) -> FiniteMetricSpace:
    n = spec.count
    if spec.mode == "uniform":
        theta = np.sort(_rng(spec).uniform(0, 2 * math.pi, n))
    else:
        theta = 2 * math.pi * np.arange(n) / n
        if spec.mode == "jittered":
            theta = theta + _rng(spec).uniform(-spec.jitter, spec.jitter, n) / spec.radius
    _check_size(n)
    dist = circle_distances(theta, spec.radius, spec.geodesic)
    coords = spec.radius * np.column_stack([np.cos(theta), np.sin(theta)])
    meta = {
        "shape": "circle",
        "radius": spec.radius,
        "geodesic": spec.geodesic,
        "angles": theta,
        # the chordal metric is not a length metric, so no star radius applies
        "star_radius": math.pi * spec.radius / 2 if spec.geodesic else None,
    }
    return FiniteMetricSpace(dist, coords=coords, meta=meta)


def _ball_uniform(rng, n: int, dim: int, radius: float) -> np.ndarray:
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * radius * rng.uniform(0, 1, (n, 1)) ** (1 / dim)


def lattice_in_ball(radius: float, spacing: float, dim: int = 2) -> np.ndarray:
    """Square lattice points (through the origin) strictly inside B(0, radius)."""
    k = int(math.floor(radius / spacing))
    axis = spacing * np.arange(-k, k + 1)
    grid = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    inside = np.linalg.norm(grid, axis=1) < radius
    pts = grid[inside]
    # origin first, then by distance from the origin, then lexicographic
    order = np.lexsort(tuple(pts[:, d] for d in reversed(range(dim))) + (np.round(np.linalg.norm(pts, axis=1), 12),))
    return pts[order]


def _sample_disk(spec: SampleSpec) -> FiniteMetricSpace:
    rng = _rng(spec)
    if spec.mode == "uniform":
        pts = _ball_uniform(rng, spec.count, spec.dim, spec.radius)
    else:
        pts = lattice_in_ball(spec.radius, spec.radius / spec.count, spec.dim)
        if spec.mode == "jittered":
            moved = pts + rng.uniform(-spec.jitter, spec.jitter, pts.shape)
            keep = np.linalg.norm(moved, axis=1) < spec.radius
            pts = np.where(keep[:, None], moved, pts)
    _check_size(len(pts))
    meta = {"shape": "disk", "radius": spec.radius, "dim": spec.dim,
            "star_radius": math.inf, "center": np.zeros(spec.dim)}
    return FiniteMetricSpace(_euclidean(pts), coords=pts, meta=meta)


def _sample_torus(spec: SampleSpec) -> FiniteMetricSpace:
    sides = np.asarray(spec.sides, dtype=float)
    rng = _rng(spec)
    if spec.mode == "uniform":
        pts = rng.uniform(0, 1, (spec.count, sides.size)) * sides
    else:
        axes = [s * np.arange(spec.count) / spec.count for s in sides]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, sides.size)
        if spec.mode == "jittered":
            pts = (pts + rng.uniform(-spec.jitter, spec.jitter, pts.shape)) % sides
    _check_size(len(pts))
    meta = {"shape": "flat_torus", "sides": tuple(sides.tolist()),
            # convexity radius of a flat torus: a quarter of the shortest closed geodesic
            "star_radius": float(sides.min()) / 4}
    return FiniteMetricSpace(torus_distances(pts, sides), coords=pts, meta=meta)


_SAMPLERS = {
    "interval": _sample_interval,
    "circle": _sample_circle,
    "disk": _sample_disk,
    "flat_torus": _sample_torus,
}


def sample(spec: SampleSpec) -> FiniteMetricSpace:
    """Deterministic for a fixed spec (and seed)."""
    return _SAMPLERS[spec.shape](spec)


def covering_radius_bound(points: np.ndarray, radius: float, probe: float) -> float:
    """Upper bound on sup over the open disk of the distance to ``points``.

    The probe set is a square lattice of spacing ``probe`` plus the boundary
    circle at arc spacing ``probe``; every disk point lies within
    ``probe * sqrt(2)`` of a probe point, which is added to the bound.
    """
    lat = lattice_in_ball(radius, probe, 2)
    m = max(8, int(math.ceil(2 * math.pi * radius / probe)))
    t = 2 * math.pi * np.arange(m) / m
    ring = radius * np.column_stack([np.cos(t), np.sin(t)])
    probes = np.vstack([lat, ring])
    worst = float(cKDTree(points).query(probes)[0].max())
    return worst + probe * math.sqrt(2)


def dense_disk_grid(radius: float, delta: float, slack: float = 0.9,
                    probe_fraction: float = 0.05) -> FiniteMetricSpace:
    """A finite subset of the open 2-disk that is certified ``delta``-dense.

    Hexagonal lattice through the origin plus a ring just inside the
    boundary; the lattice is refined until ``covering_radius_bound`` is
    below ``delta``. The origin is index 0.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    scale = slack
    for _ in range(60):
        h = math.sqrt(3) * delta * scale
        k = int(math.ceil(radius / h)) + 2
        i, j = np.meshgrid(np.arange(-k, k + 1), np.arange(-k, k + 1), indexing="ij")
        x = h * (i + 0.5 * j)
        y = h * (math.sqrt(3) / 2) * j
        _check_size(int(math.pi * (radius / h) ** 2 * 2 / math.sqrt(3)))
        pts = np.column_stack([x.ravel(), y.ravel()])
        pts = pts[np.linalg.norm(pts, axis=1) < radius]
        m = max(6, int(math.ceil(2 * math.pi * radius / (1.5 * delta * scale))))
        t = 2 * math.pi * np.arange(m) / m
        ring_r = radius - 0.25 * delta * scale
        ring = ring_r * np.column_stack([np.cos(t), np.sin(t)])
        # drop ring points that crowd a lattice point
        if len(pts):
            ring = ring[cKDTree(pts).query(ring)[0] > 0.5 * h]
        cand = np.vstack([pts, ring])
        order = np.lexsort((cand[:, 1], cand[:, 0], np.round(np.linalg.norm(cand, axis=1), 12)))
        cand = cand[order]
        _check_size(len(cand))
        bound = covering_radius_bound(cand, radius, probe_fraction * delta)
        if bound < delta:
            meta = {"shape": "disk", "radius": radius, "dim": 2, "star_radius": math.inf,
                    "center": np.zeros(2), "density": delta, "covering_bound": bound}
            return FiniteMetricSpace(_euclidean(cand), coords=cand, meta=meta)
        scale *= 0.95
    raise RuntimeError("could not certify density")


def dense_disk_size_estimate(radius: float, delta: float) -> int:
    """Rough point count of ``dense_disk_grid`` without building it."""
    h = math.sqrt(3) * delta * 0.9
    lattice = math.pi * radius ** 2 / (h * h * math.sqrt(3) / 2)
    ring = 2 * math.pi * radius / (1.35 * delta)
    return int(lattice + ring)
