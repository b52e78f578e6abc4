"""GF(2) simplicial homology and persistence by column reduction.

Columns are Python ints used as bitsets over row positions, so adding two
columns is a single XOR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .srips import Filtration, SimplicialComplex, filtration_order


@dataclass(frozen=True)
class BoundaryMatrix:
    """Boundary map from d-simplices (columns) to (d-1)-simplices (rows)."""

    dim: int
    rows: tuple
    cols: tuple
    columns: tuple  # sorted row positions per column

    def bitsets(self) -> list[int]:
        return [sum(1 << r for r in col) for col in self.columns]


def boundary_matrix(complex_: SimplicialComplex, d: int) -> BoundaryMatrix:
    if d < 1 or d > complex_.dim:
        rows = complex_.simplices[d - 1] if 1 <= d <= complex_.dim + 1 else ()
        return BoundaryMatrix(d, tuple(rows), (), ())
    rows = complex_.simplices[d - 1]
    cols = complex_.simplices[d]
    pos = {s: i for i, s in enumerate(rows)}
    columns = tuple(
        tuple(sorted(pos[s[:k] + s[k + 1:]] for k in range(d + 1))) for s in cols)
    return BoundaryMatrix(d, rows, cols, columns)


def _facet_bits(simplices: Iterable[tuple], pos: dict) -> Iterator[int]:
    for s in simplices:
        col = 0
        for k in range(len(s)):
            col |= 1 << pos[s[:k] + s[k + 1:]]
        yield col


def reduce_columns(columns: Iterable[int], cleared: Iterable[int] = (),
                   max_rank: int | None = None) -> dict[int, tuple[int, int]]:
    """Left-to-right column reduction.

    Returns ``low -> (column index, reduced column)`` for the pivot columns
    only. Reduction stops early once ``max_rank`` pivots are found.
    """
    skip = set(cleared)
    pivots: dict[int, tuple[int, int]] = {}
    if max_rank is not None and max_rank <= 0:
        return pivots
    for j, col in enumerate(columns):
        if j in skip:
            continue
        while col:
            low = col.bit_length() - 1
            hit = pivots.get(low)
            if hit is None:
                pivots[low] = (j, col)
                break
            col ^= hit[1]
        if max_rank is not None and len(pivots) >= max_rank:
            break
    return pivots


def boundary_ranks(complex_: SimplicialComplex, top: int) -> list[int]:
    """rank of the boundary map d_k for k = 0..top (rank d_0 = 0).

    Ranks are computed bottom-up; rank d_k can never exceed the dimension of
    the cycle space it maps into, so each reduction stops once it gets there.
    """
    ranks = [0] * (top + 1)
    counts = complex_.counts()
    for d in range(1, min(top, complex_.dim) + 1):
        rows = complex_.simplices[d - 1]
        pos = {s: i for i, s in enumerate(rows)}
        cycles = counts[d - 1] - ranks[d - 1]
        ranks[d] = len(reduce_columns(_facet_bits(complex_.simplices[d], pos), max_rank=cycles))
    return ranks


def betti(complex_: SimplicialComplex, dim_cap: int) -> list[int]:
    """beta_0..beta_dim_cap over GF(2)."""
    ranks = boundary_ranks(complex_, dim_cap + 1)
    counts = complex_.counts() + [0] * (dim_cap + 2)
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(dim_cap + 1)]


def boundary_squared_zero(complex_: SimplicialComplex) -> bool:
    for d in range(2, complex_.dim + 1):
        lower = complex_.simplices[d - 2]
        pos_low = {s: i for i, s in enumerate(lower)}
        mid = complex_.simplices[d - 1]
        mid_bits = dict(zip(mid, _facet_bits(mid, pos_low)))
        for s in complex_.simplices[d]:
            acc = 0
            for k in range(d + 1):
                acc ^= mid_bits[s[:k] + s[k + 1:]]
            if acc:
                return False
    return True


@dataclass(frozen=True)
class Barcode:
    """Half-open intervals [birth, death) per homology dimension."""

    intervals: dict = field(default_factory=dict)

    def bars(self, dim: int) -> list[tuple[float, float]]:
        return list(self.intervals.get(dim, []))

    def betti_at(self, t: float, dim_cap: int) -> list[int]:
        return [sum(1 for b, d in self.bars(k) if b <= t < d) for k in range(dim_cap + 1)]

    def long_bars(self, dim: int, start: float, end: float) -> list[tuple[float, float]]:
        """Bars alive on the whole window [start, end]."""
        return [(b, d) for b, d in self.bars(dim) if b <= start and d > end]

    def rows(self) -> list[tuple[int, float, float]]:
        return [(k, b, d) for k in sorted(self.intervals) for b, d in self.intervals[k]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        return self.rows() == other.rows()


def persistence_pairs(items: Sequence[tuple[tuple, float]], dim_cap: int) -> Barcode:
    """Barcode of (simplex, birth) items already in filtration order."""
    by_dim: dict[int, list[tuple[tuple, float]]] = {}
    for s, b in items:
        by_dim.setdefault(len(s) - 1, []).append((s, b))
    top = max(by_dim, default=-1)
    bars: dict[int, list] = {k: [] for k in range(dim_cap + 1)}
    killed: dict[int, set] = {}
    negative: dict[int, set] = {}
    cleared: set[int] = set()
    for d in range(min(top, dim_cap + 1), 0, -1):
        rows = by_dim.get(d - 1, [])
        pos = {s: i for i, (s, _) in enumerate(rows)}
        cols = by_dim.get(d, [])
        pivots = {low: j for low, (j, _) in
                  reduce_columns(_facet_bits((s for s, _ in cols), pos), cleared).items()}
        for low, j in pivots.items():
            b, death = rows[low][1], cols[j][1]
            if d - 1 <= dim_cap and death > b:
                bars[d - 1].append((b, death))
        killed[d - 1] = set(pivots)
        negative[d] = set(pivots.values())
        cleared = set(pivots)
    for d in range(min(top, dim_cap) + 1):
        dead, neg = killed.get(d, set()), negative.get(d, set())
        for i, (s, b) in enumerate(by_dim.get(d, [])):
            if i not in dead and i not in neg:
                bars[d].append((b, math.inf))
    return Barcode({k: sorted(v) for k, v in bars.items()})


def persistence(filtration: Filtration, dim_cap: int) -> Barcode:
    filtration.check_monotone()
    return persistence_pairs(filtration.ordered(), dim_cap)


def induced_rank(sub: SimplicialComplex, sup: SimplicialComplex, dim: int) -> int:
    """Rank of H_dim(sub) -> H_dim(sup) induced by inclusion."""
    sup_set = sup.as_set()
    extra = [s for s in sub if s not in sup_set]
    if extra:
        raise ValueError(f"{extra[0]} is in the subcomplex but not in the supercomplex")
    sub_set = sub.as_set()
    items = [(s, 0.0) for s in sub] + [(s, 1.0) for s in sup if s not in sub_set]
    barcode = persistence_pairs(filtration_order(items), dim)
    return sum(1 for b, d in barcode.bars(dim) if b == 0.0 and d > 1.0)
