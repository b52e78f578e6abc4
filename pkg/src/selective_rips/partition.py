"""Exact small-graph coloring used for clustering feasibility.

A vertex set splits into at most k parts of diameter below a bound iff its
conflict graph (pairs at or above the bound) is k-colorable.
"""

from __future__ import annotations

import numpy as np


def conflict_masks(block: np.ndarray, bound: float, strict: bool = True) -> list[int]:
    """Adjacency bitmasks of the conflict graph of a distance block."""
    bad = block >= bound if strict else block > bound
    np.fill_diagonal(bad, False)
    weights = 1 << np.arange(block.shape[0], dtype=object)
    return [int((weights * row).sum()) for row in bad]


def _components(adj: list[int]) -> list[list[int]]:
    seen = 0
    comps = []
    for v in range(len(adj)):
        if seen >> v & 1:
            continue
        comp, frontier = 0, 1 << v
        while frontier:
            comp |= frontier
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~comp
        seen |= comp
        comps.append([u for u in range(len(adj)) if comp >> u & 1])
    return comps


def _color_component(adj: list[int], verts: list[int], k: int) -> bool:
    if len(verts) <= k:
        return True
    colors = {}
    n = len(verts)

    def pick():
        # DSatur: most distinct neighbor colors, then highest degree, then lowest index
        best, key = None, None
        for v in verts:
            if v in colors:
                continue
            sat = len({colors[u] for u in colors if adj[v] >> u & 1})
            cand = (sat, bin(adj[v]).count("1"), -v)
            if key is None or cand > key:
                best, key = v, cand
        return best

    def bt(n_colored: int, n_used: int) -> bool:
        if n_colored == n:
            return True
        v = pick()
        taken = {colors[u] for u in colors if adj[v] >> u & 1}
        # a fresh color is only tried once: colors are interchangeable
        for c in range(min(k, n_used + 1)):
            if c in taken:
                continue
            colors[v] = c
            if bt(n_colored + 1, max(n_used, c + 1)):
                return True
            del colors[v]
        return False

    return bt(0, 0)


def k_colorable(adj: list[int], k: int) -> bool:
    n = len(adj)
    if k >= n:
        return True
    if not any(adj):
        return k >= 1
    if k <= 1:
        return False
    for comp in _components(adj):
        if len(comp) > 1 and not _color_component(adj, comp, k):
            return False
    return True
