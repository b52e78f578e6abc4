"""Independent reference implementations used to pin down expected values.

Nothing here imports the package's algorithms; everything is done the slow,
obvious way (itertools, brute-force partitions, dense GF(2) elimination,
scipy root finding).
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar


def random_euclidean(rng: np.random.Generator, n: int, dim: int = 2) -> np.ndarray:
    pts = rng.uniform(0, 1, (n, dim))
    return np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))


def flag_complex(dist: np.ndarray, r: float, dim_cap: int) -> set:
    """Every vertex set up to dim_cap+1 points whose pairwise distances are < r."""
    n = dist.shape[0]
    out = set()
    for k in range(1, dim_cap + 2):
        for sigma in itertools.combinations(range(n), k):
            if all(dist[a, b] < r for a, b in itertools.combinations(sigma, 2)):
                out.add(sigma)
    return out


def set_partitions(items):
    """All set partitions of a list (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for j in range(len(part)):
            yield part[:j] + [[first] + part[j]] + part[j + 1:]
        yield [[first]] + part


def _diam(dist, part) -> float:
    return max((dist[a, b] for a, b in itertools.combinations(part, 2)), default=0.0)


def brute_is_simplex(dist: np.ndarray, sigma, scales) -> bool:
    """For each i < |sigma|, some partition into <= i blocks has every block diameter < r_i."""
    sigma = list(sigma)
    m = len(sigma)
    parts = list(set_partitions(sigma))
    for i in range(1, m):
        r = scales[min(i, len(scales)) - 1]
        if not any(len(p) <= i and all(_diam(dist, b) < r for b in p) for p in parts):
            return False
    return True


def brute_cluster_width(dist: np.ndarray, sigma, i: int) -> float:
    return min(max(_diam(dist, b) for b in p)
               for p in set_partitions(list(sigma)) if len(p) <= i)


def plain_persistence(items, dim_cap: int) -> dict:
    """Textbook column reduction over the whole filtration, no clearing.

    ``items`` are (simplex, birth) pairs in filtration order. Returns
    {dim: sorted list of (birth, death)} with zero-length bars dropped.
    """
    index = {s: j for j, (s, _) in enumerate(items)}
    columns = []
    for s, _ in items:
        col = set()
        if len(s) > 1:
            for face in itertools.combinations(s, len(s) - 1):
                col.add(index[face])
        columns.append(col)
    low_of = {}
    lows = [None] * len(columns)
    for j in range(len(columns)):
        col = columns[j]
        while col and max(col) in low_of:
            col ^= columns[low_of[max(col)]]
        if col:
            low_of[max(col)] = j
            lows[j] = max(col)
    bars = {k: [] for k in range(dim_cap + 1)}
    paired = set()
    for j, low in enumerate(lows):
        if low is None:
            continue
        paired.update((j, low))
        s, b = items[low]
        d = items[j][1]
        if len(s) - 1 <= dim_cap and d > b:
            bars[len(s) - 1].append((b, d))
    for j, (s, b) in enumerate(items):
        if j not in paired and lows[j] is None and len(s) - 1 <= dim_cap:
            bars[len(s) - 1].append((b, math.inf))
    return {k: sorted(v) for k, v in bars.items()}


def gf2_rank(rows: list[list[int]]) -> int:
    """Rank of a dense 0/1 matrix by Gaussian elimination."""
    m = np.array(rows, dtype=np.uint8) % 2 if rows else np.zeros((0, 0), dtype=np.uint8)
    if m.size == 0:
        return 0
    rank, (nr, nc) = 0, m.shape
    for c in range(nc):
        pivot = next((r for r in range(rank, nr) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(nr):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def dense_betti(simplices: set, dim_cap: int) -> list[int]:
    """Betti numbers from dense boundary matrices."""
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    for v in by_dim.values():
        v.sort()
    ranks = {}
    for d in range(1, dim_cap + 2):
        rows = by_dim.get(d - 1, [])
        cols = by_dim.get(d, [])
        pos = {s: i for i, s in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, s in enumerate(cols):
            for face in itertools.combinations(s, d):
                mat[pos[face]][j] = 1
        ranks[d] = gf2_rank(mat) if rows and cols else 0
    return [len(by_dim.get(d, [])) - ranks.get(d, 0) - ranks.get(d + 1, 0)
            for d in range(dim_cap + 1)]


def two_disc_delta1(r_inf: float, r_prime: float) -> float:
    """Inscribed radius from plane geometry, without the closed form.

    Put the center at the origin and y at (r', 0). The corner p of the lens
    between |x| = r' and |x - y| = r_inf is found by root finding on the
    angle; the point of the segment [0, y] nearest to p is found by 1-D
    minimization; delta1 is r_inf minus that distance.
    """
    y = np.array([r_prime, 0.0])

    def gap(phi):
        p = r_prime * np.array([math.cos(phi), math.sin(phi)])
        return float(np.linalg.norm(p - y)) - r_inf

    # chord length grows from 0 at phi=0 to 2r' >= r_inf at phi=pi
    phi = brentq(gap, 1e-15, math.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    p = r_prime * np.array([math.cos(phi), math.sin(phi)])
    res = minimize_scalar(lambda t: float(np.linalg.norm(p - t * y)), bounds=(0.0, 1.0),
                          method="bounded", options={"xatol": 1e-13})
    return r_inf - float(res.fun)


def hausdorff_brute(dist: np.ndarray, a, b) -> float:
    return max(max(min(dist[x, y] for y in b) for x in a),
               max(min(dist[x, y] for x in a) for y in b))
