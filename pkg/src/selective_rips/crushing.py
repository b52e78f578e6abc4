"""Discrete crushings: ball-inclusion moves that shrink a finite space
without changing the homotopy type of its selective Rips complex.

A crushing maps a set A onto a point b when, at every scale r_i,
B(a, r_i) is contained in B(b, r_i) for all a in A. A space is crushable if
such moves reach a set of diameter below r_inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import DEFAULTS
from .gluing import PseudoMetricUnion
from .metric import FiniteMetricSpace, Verdict, one_center
from .srips import ScaleSequence, build_complex, is_simplex


class CrushingError(RuntimeError):
    def __init__(self, message: str, step=None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class CrushingStep:
    """Crush ``crushed`` onto ``target``.

    ``certificate`` holds one ``(a, r, |B(a,r)|, |B(b,r)|)`` entry per crushed
    point and distinct scale value, all verified inclusions.
    """

    crushed: tuple
    target: int
    certificate: tuple = ()
    note: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.target in self.crushed:
            raise ValueError("the target cannot be crushed onto itself")

    @property
    def elementary(self) -> bool:
        return len(self.crushed) == 1

    def to_dict(self) -> dict:
        out = {
            "A": list(self.crushed),
            "b": self.target,
            "certificate": [
                {"a": a, "r": r, "ball_a": na, "ball_b": nb} for a, r, na, nb in self.certificate
            ],
        }
        if self.note:
            out["note"] = {k: (float(v) if isinstance(v, (float, np.floating)) else v)
                           for k, v in self.note.items()}
        return out


@dataclass(frozen=True)
class CrushingSequence:
    """Ordered crushings of a space; ``stuck`` is the live set on failure."""

    n_points: int
    scales: ScaleSequence
    steps: tuple
    terminal: tuple
    terminal_diameter: float
    success: bool
    stuck: Optional[tuple] = None
    strategy: str = ""

    def __bool__(self) -> bool:
        return self.success

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "strategy": self.strategy,
            "scales": list(self.scales.prefix),
            "n_points": self.n_points,
            "n_steps": len(self.steps),
            "steps": [s.to_dict() for s in self.steps],
            "terminal": list(self.terminal),
            "terminal_diameter": self.terminal_diameter,
            "stuck_at": None if self.stuck is None else list(self.stuck),
        }


def _mask(n: int, live: Iterable[int] | np.ndarray | None) -> np.ndarray:
    if live is None:
        return np.ones(n, dtype=bool)
    if isinstance(live, np.ndarray) and live.dtype == bool:
        return live.copy()
    m = np.zeros(n, dtype=bool)
    m[list(live)] = True
    return m


@dataclass(frozen=True)
class CrushCheck:
    ok: bool
    certificate: tuple = ()
    witness: Optional[tuple] = None  # (a, r, x) with x in B(a,r) but not in B(b,r)

    def __bool__(self) -> bool:
        return self.ok


def crush_condition(space: FiniteMetricSpace, live, crushed: Sequence[int], target: int,
                    scales: ScaleSequence) -> CrushCheck:
    """Check B(a, r) & live <= B(b, r) & live for every a and distinct scale r."""
    alive = _mask(space.n, live)
    crushed = [int(a) for a in crushed]
    if not crushed:
        raise ValueError("nothing to crush")
    if not all(alive[a] for a in crushed) or not alive[target] or target in crushed:
        raise ValueError("crushed points and target must be distinct live points")
    dist = space.dist
    cert = []
    for r in scales.distinct_values():
        ball_b = alive & (dist[target] < r)
        nb = int(ball_b.sum())
        for a in crushed:
            ball_a = alive & (dist[a] < r)
            escape = ball_a & ~ball_b
            if escape.any():
                return CrushCheck(False, tuple(cert), (a, r, int(np.argmax(escape))))
            cert.append((a, r, int(ball_a.sum()), nb))
    cert.sort(key=lambda e: (e[0], -e[1]))
    return CrushCheck(True, tuple(cert))


def make_step(space, live, crushed, target, scales, **note) -> CrushingStep:
    check = crush_condition(space, live, crushed, target, scales)
    if not check:
        a, r, x = check.witness
        step = CrushingStep(tuple(sorted(crushed)), int(target), check.certificate, note)
        raise CrushingError(f"point {x} lies in B({a},{r}) but not in B({target},{r})", step)
    return CrushingStep(tuple(sorted(int(a) for a in crushed)), int(target), check.certificate, note)


def apply_crush(space: FiniteMetricSpace, live, step: CrushingStep,
                scales: ScaleSequence) -> frozenset:
    """Live set after the step; the step is re-verified first."""
    make_step(space, live, step.crushed, step.target, scales)
    return frozenset(set(int(v) for v in np.flatnonzero(_mask(space.n, live))) - set(step.crushed))


def contiguity_certificate(space: FiniteMetricSpace, live, step: CrushingStep,
                           scales: ScaleSequence, dim_cap: int = DEFAULTS.dim_cap) -> Verdict:
    """For an elementary step a -> b, check that sigma + {b} is a simplex for
    every simplex sigma containing a (dimension <= dim_cap) of the live complex.

    Failure returns the first offending sigma.
    """
    if not step.crushed:
        return Verdict(True)
    if len(step.crushed) != 1:
        raise ValueError("contiguity is certified for elementary steps only")
    a, b = step.crushed[0], step.target
    alive = _mask(space.n, live)
    near = np.flatnonzero(alive & (space.dist[a] < scales.r1))
    local = build_complex(space, scales, dim_cap, vertices=near.tolist())
    for sigma in local:
        if a not in sigma or b in sigma:
            continue
        grown = tuple(sorted(sigma + (b,)))
        if not is_simplex(space, grown, scales):
            return Verdict(False, sigma)
    return Verdict(True)


def _finish(space, scales, steps, alive, strategy, stuck=False) -> CrushingSequence:
    terminal = tuple(int(v) for v in np.flatnonzero(alive))
    diam = space.diameter(terminal)
    return CrushingSequence(space.n, scales, tuple(steps), terminal, diam,
                            diam < scales.r_inf, terminal if stuck else None, strategy)


def _farthest_first(space, scales, center) -> CrushingSequence:
    dist = space.dist
    alive = np.ones(space.n, dtype=bool)
    to_center = dist[center]
    steps = []
    while alive.sum() > 1:
        idx = np.flatnonzero(alive)
        y = int(idx[np.argmax(to_center[idx])])
        if y == center:
            cands = idx[idx != y]
        else:
            cands = idx[(to_center[idx] < to_center[y])]
        cands = cands[np.lexsort((cands, dist[y, cands]))]
        for b in cands:
            check = crush_condition(space, alive, [y], int(b), scales)
            if check:
                steps.append(CrushingStep((y,), int(b), check.certificate))
                alive[y] = False
                break
        else:
            return _finish(space, scales, steps, alive, "farthest-first", stuck=True)
    return _finish(space, scales, steps, alive, "farthest-first")


def _exhaustive(space, scales) -> CrushingSequence:
    dist = space.dist
    alive = np.ones(space.n, dtype=bool)
    steps = []
    while alive.sum() > 1:
        found = False
        for a in np.flatnonzero(alive):
            # b must sit in B(a, r_inf), since a itself does
            for b in np.flatnonzero(alive & (dist[a] < scales.r_inf)):
                if b == a:
                    continue
                check = crush_condition(space, alive, [int(a)], int(b), scales)
                if check:
                    steps.append(CrushingStep((int(a),), int(b), check.certificate))
                    alive[a] = False
                    found = True
                    break
            if found:
                break
        if not found:
            return _finish(space, scales, steps, alive, "exhaustive-elementary", stuck=True)
    return _finish(space, scales, steps, alive, "exhaustive-elementary")


def greedy_crushable(space: FiniteMetricSpace, scales: ScaleSequence,
                     strategy: str = "farthest-first", center: Optional[int] = None) -> CrushingSequence:
    """Search for elementary crushings down to a single point.

    ``farthest-first`` repeatedly crushes the live point farthest from
    ``center`` (default: the 1-center) into an admissible point nearer to the
    center, trying candidates by distance to the crushed point.
    ``exhaustive-elementary`` takes the lexicographically first admissible
    pair. Success means the terminal set has diameter below r_inf; failure
    is returned, not raised.
    """
    if strategy in ("farthest-first", "farthest"):
        return _farthest_first(space, scales, one_center(space) if center is None else int(center))
    if strategy in ("exhaustive-elementary", "exhaustive"):
        return _exhaustive(space, scales)
    raise ValueError(f"unknown strategy {strategy!r}")


def replay(space: FiniteMetricSpace, seq: CrushingSequence, scales: ScaleSequence | None = None,
           contiguity_cap: Optional[int] = None) -> Verdict:
    """Re-verify every step of a sequence in order.

    With ``contiguity_cap`` set, elementary steps also get a contiguity
    certificate up to that dimension. The witness is the failing step index.
    """
    scales = scales or seq.scales
    alive = np.ones(space.n, dtype=bool)
    for k, step in enumerate(seq.steps):
        if not crush_condition(space, alive, step.crushed, step.target, scales):
            return Verdict(False, k)
        if contiguity_cap is not None and step.elementary:
            if not contiguity_certificate(space, alive, step, scales, contiguity_cap):
                return Verdict(False, k)
        alive[list(step.crushed)] = False
    terminal = tuple(int(v) for v in np.flatnonzero(alive))
    if terminal != tuple(seq.terminal):
        return Verdict(False, len(seq.steps))
    return Verdict(True)


def delta1(r_inf: float, r_prime: float) -> float:
    """Radius of the ball around the inward target that admits every crushing
    of a farthest point at distance r_prime from the center."""
    if not r_inf > 0 or r_prime < r_inf / math.sqrt(2) * (1 - 1e-15):
        raise ValueError(f"need r_prime >= r_inf / sqrt(2) > 0, got r_inf={r_inf}, r_prime={r_prime}")
    q = min(1.0, r_inf * r_inf / (4 * r_prime * r_prime))
    return r_inf * (1 - math.sqrt(1 - q))


def delta1_prime(r_inf: float, alpha: float, k: float = DEFAULTS.k_divisor) -> float:
    if k < 8:
        raise ValueError(f"the divisor must be at least 8, got {k}")
    if alpha < r_inf:
        raise ValueError("alpha must be at least r_inf")
    return delta1(r_inf, alpha) / k


def inward_target(y: np.ndarray, center: np.ndarray, r_inf: float) -> np.ndarray:
    """Point on the segment from y to the center at distance r_inf^2 / (2 r') from y."""
    y = np.asarray(y, dtype=float)
    center = np.asarray(center, dtype=float)
    r_prime = float(np.linalg.norm(y - center))
    if r_prime <= r_inf / math.sqrt(2):
        raise ValueError("the inward target needs r' > r_inf / sqrt(2)")
    step = r_inf * r_inf / (2 * r_prime)
    return y + (center - y) * (step / r_prime)


def structural_gap(points: np.ndarray, y_index: int, center: np.ndarray, r_i: float,
                   r_inf: float, radius: float) -> float:
    """max of d(x, y^) - (r_i - radius) over points x with |x - center| <= r'
    and d(x, y) <= r_i; non-positive when the nesting bound holds."""
    y = points[y_index]
    r_prime = float(np.linalg.norm(y - center))
    yhat = inward_target(y, center, r_inf)
    inside = np.linalg.norm(points - center, axis=1) <= r_prime
    close = np.linalg.norm(points - y, axis=1) <= r_i
    sel = points[inside & close]
    if len(sel) == 0:
        return -math.inf
    return float(np.linalg.norm(sel - yhat, axis=1).max() - (r_i - radius))


def crushable_in_union(union: PseudoMetricUnion, scales: ScaleSequence, alpha: float,
                       k: float = DEFAULTS.k_divisor, center=None) -> CrushingSequence:
    """Crush the right side of a union whose left side is a flat star-shaped model.

    Left points are visited farthest-first from ``center``. Each visit crushes
    the live right points within 2*delta1' of it onto the live right point
    nearest to its inward target; once the visited radius drops below
    r_inf/sqrt(2), whatever is left is crushed onto the right point nearest
    the center. Every step is verified; a failed verification raises
    CrushingError carrying the step.
    """
    left, right = union.left, union.right
    if left.coords is None or left.meta.get("shape") in ("circle", "flat_torus"):
        raise ValueError("the left side must be a flat sample with coordinates")
    d1p = delta1_prime(scales.r_inf, alpha, k)
    if not union.declared_bound < d1p:
        raise ValueError(f"declared bound {union.declared_bound} is not below delta1' = {d1p}")
    if center is None:
        center = left.meta.get("center", np.zeros(left.coords.shape[1]))
    center = np.asarray(center, dtype=float)
    radial = np.linalg.norm(left.coords - center, axis=1)
    order = np.lexsort((np.arange(left.n), -radial))
    alive = np.ones(right.n, dtype=bool)
    steps = []
    stop = scales.r_inf / math.sqrt(2)
    for y in order:
        if radial[y] < stop:
            break
        grab = alive & (union.cross[y] < 2 * d1p)
        if not grab.any():
            continue
        yhat = inward_target(left.coords[y], center, scales.r_inf)
        reach = np.where(alive & ~grab, union.distance_from_point(yhat), np.inf)
        if not np.isfinite(reach).any():
            raise CrushingError(f"no live target left for model point {y}")
        target = int(np.argmin(reach))
        steps.append(make_step(right, alive, np.flatnonzero(grab), target, scales,
                               model_point=int(y), r_prime=float(radial[y]),
                               target_gap=float(reach[target])))
        alive &= ~grab
    reach = np.where(alive, union.distance_from_point(center), np.inf)
    root = int(np.argmin(reach))
    rest = np.flatnonzero(alive)
    rest = rest[rest != root]
    if rest.size:
        steps.append(make_step(right, alive, rest, root, scales, final=True,
                               target_gap=float(reach[root])))
        alive[rest] = False
    return _finish(right, scales, steps, alive, "glued-farthest-first")
