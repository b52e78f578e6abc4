"""Reading and writing spaces, complexes, barcodes and reports."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .homology import Barcode
from .metric import FiniteMetricSpace
from .sampling import circle_distances, euclidean_space, torus_distances
from .srips import SimplicialComplex


class ParseError(ValueError):
    """Malformed or empty input."""


_SPLIT = re.compile(r"[,\s]+")
_HEADER = re.compile(r"\s*#\s*n\s*=\s*(\d+)\s*$")


def _numbers(line: str) -> list[float]:
    parts = [p for p in _SPLIT.split(line.strip()) if p]
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"not a number in line {line.strip()!r}") from exc


def _data_lines(text: str) -> list[str]:
    return [line for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]


def parse_matrix_text(text: str) -> np.ndarray:
    """Square, lower-triangular with diagonal, or strictly lower-triangular rows.

    Values may be separated by commas or whitespace. Blank lines and lines
    starting with ``#`` are ignored, except a ``# n=<count>`` header, which
    fixes the point count (needed for a single point in strict form).
    """
    hint = None
    for line in text.splitlines():
        found = _HEADER.match(line)
        if found:
            hint = int(found.group(1))
    rows = [_numbers(line) for line in _data_lines(text)]
    if hint == 1 and not rows:
        return np.zeros((1, 1))
    if not rows:
        raise ParseError("no distances found")
    lengths = [len(r) for r in rows]
    m = len(rows)
    triangular = lengths == list(range(1, m + 1))
    if hint == m + 1 and triangular:
        n = m + 1
    elif all(k == m for k in lengths):
        if hint is not None and hint != m:
            raise ParseError(f"header says n={hint} but the rows describe {m} points")
        return np.array(rows, dtype=float)
    elif triangular and all(r[-1] == 0 for r in rows):
        n, rows = m, [r[:-1] for r in rows]
    elif triangular:
        n = m + 1
    else:
        raise ParseError(f"row lengths {lengths[:6]} fit neither a square nor a triangular layout")
    if hint is not None and hint != n:
        raise ParseError(f"header says n={hint} but the rows describe {n} points")
    dist = np.zeros((n, n))
    for i, row in enumerate(rows):
        target = i if n == m else i + 1
        dist[target, :len(row)] = row
    return dist + dist.T


def read_matrix(path) -> FiniteMetricSpace:
    """A distance matrix from ``.json`` (list of rows or {"distances": ...}) or text."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        rows = data.get("distances") if isinstance(data, dict) else data
        if not rows:
            raise ParseError(f"{path}: no distances found")
        try:
            dist = np.array(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{path}: {exc}") from exc
    else:
        try:
            dist = parse_matrix_text(text)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    return FiniteMetricSpace(dist, meta={"source": str(path)})


def format_matrix(space: FiniteMetricSpace) -> str:
    """``# n=<count>`` header, then row i = d(i, 0..i-1) comma-separated for i >= 1."""
    lines = [f"# n={space.n}"]
    lines += [",".join(repr(float(v)) for v in space.dist[i, :i]) for i in range(1, space.n)]
    return "\n".join(lines) + "\n"


def write_matrix(space: FiniteMetricSpace, path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps({"distances": space.dist.tolist()}) + "\n")
    else:
        path.write_text(format_matrix(space))


METRICS = ("euclidean", "circle", "flat_torus")


def read_cloud(path, metric: str = "euclidean", radius: float = 1.0,
               sides: Iterable[float] = (1.0, 1.0)) -> FiniteMetricSpace:
    """A CSV point cloud; ``circle`` takes angles (one column) or planar points."""
    path = Path(path)
    if metric not in METRICS:
        raise ParseError(f"unknown metric {metric!r}; expected one of {METRICS}")
    rows = [_numbers(line) for line in _data_lines(path.read_text())]
    if not rows:
        raise ParseError(f"{path}: no points found")
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"{path}: rows have different lengths")
    pts = np.array(rows, dtype=float)
    if metric == "euclidean":
        return euclidean_space(pts, {"source": str(path)})
    if metric == "circle":
        if pts.shape[1] == 1:
            theta = pts[:, 0]
        elif pts.shape[1] == 2:
            theta = np.arctan2(pts[:, 1], pts[:, 0])
        else:
            raise ParseError(f"{path}: circle clouds need one angle or two coordinates per row")
        coords = radius * np.column_stack([np.cos(theta), np.sin(theta)])
        meta = {"shape": "circle", "radius": radius, "geodesic": True, "angles": theta,
                "star_radius": math.pi * radius / 2, "source": str(path)}
        return FiniteMetricSpace(circle_distances(theta, radius), coords=coords, meta=meta)
    sides = tuple(float(s) for s in sides)
    if pts.shape[1] != len(sides):
        raise ParseError(f"{path}: torus points need {len(sides)} coordinates")
    pts = pts % np.asarray(sides)
    meta = {"shape": "flat_torus", "sides": sides, "star_radius": min(sides) / 4,
            "source": str(path)}
    return FiniteMetricSpace(torus_distances(pts, sides), coords=pts, meta=meta)


def complex_to_dict(complex_: SimplicialComplex) -> dict:
    return {"n_vertices": complex_.n_vertices, "counts": complex_.counts(),
            "simplices": [list(s) for s in complex_]}


def complex_from_dict(data: dict) -> SimplicialComplex:
    try:
        return SimplicialComplex.from_simplices(int(data["n_vertices"]),
                                                [tuple(s) for s in data["simplices"]])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"not a complex record: {exc}") from exc


def _num(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def format_complex(complex_: SimplicialComplex, births: Optional[dict] = None) -> str:
    """One ``dim v0 v1 ... vk [birth]`` line per simplex, sorted."""
    out = []
    for s in complex_:
        line = f"{len(s) - 1} " + " ".join(map(str, s))
        if births is not None:
            line += f" {_num(births[s])}"
        out.append(line + "\n")
    return "".join(out)


def parse_complex(text: str, n_vertices: Optional[int] = None
                  ) -> tuple[SimplicialComplex, Optional[dict]]:
    """Inverse of ``format_complex``; births come back only when every line has one."""
    simplices, births = [], {}
    for line in _data_lines(text):
        parts = line.split()
        try:
            dim = int(parts[0])
            verts = tuple(int(v) for v in parts[1:dim + 2])
            rest = parts[dim + 2:]
            if len(verts) != dim + 1 or len(rest) > 1:
                raise ValueError("wrong field count")
            if rest:
                births[tuple(sorted(verts))] = float(rest[0])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"bad simplex line {line!r}: {exc}") from exc
        simplices.append(verts)
    if not simplices:
        raise ParseError("no simplices found")
    n = n_vertices if n_vertices is not None else 1 + max(max(s) for s in simplices)
    complex_ = SimplicialComplex.from_simplices(n, simplices)
    return complex_, (births if len(births) == len(simplices) else None)


def barcode_csv(barcode: Barcode) -> str:
    lines = ["dim,birth,death"]
    lines += [f"{k},{_num(b)},{_num(d)}" for k, b, d in barcode.rows()]
    return "\n".join(lines) + "\n"


def parse_barcode_csv(text: str) -> Barcode:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0].replace(" ", "") != "dim,birth,death":
        raise ParseError("expected a 'dim,birth,death' header")
    bars: dict[int, list] = {}
    for line in lines[1:]:
        try:
            k, b, d = line.split(",")
            bars.setdefault(int(k), []).append((float(b), float(d)))
        except ValueError as exc:
            raise ParseError(f"bad barcode row {line!r}") from exc
    return Barcode({k: sorted(v) for k, v in bars.items()})


def barcode_to_dict(barcode: Barcode) -> dict:
    return {str(k): [[b, d] for b, d in barcode.bars(k)] for k in sorted(barcode.intervals)}


def _extent(barcode: Barcode) -> float:
    finite = [x for _, b, d in barcode.rows() for x in (b, d) if math.isfinite(x)]
    top = max(finite, default=1.0)
    return top * 1.1 if top > 0 else 1.0


def barcode_ascii(barcode: Barcode, width: int = 60) -> str:
    """Bars drawn with '-' on a common axis; infinite bars end in '>'."""
    span = _extent(barcode)
    out = []
    for k in sorted(barcode.intervals):
        out.append(f"H{k}:")
        for b, d in barcode.bars(k):
            start = int(round(b / span * width))
            end = width if math.isinf(d) else max(start + 1, int(round(d / span * width)))
            bar = " " * start + "-" * (end - start) + (">" if math.isinf(d) else "")
            death = "inf" if math.isinf(d) else f"{d:.4g}"
            out.append(f"  {bar}  [{b:.4g}, {death})")
    out.append(f"  axis: 0 .. {span:.4g}")
    return "\n".join(out) + "\n"


def barcode_svg(barcode: Barcode, width: int = 640, row: int = 10) -> str:
    """A plain SVG barcode, one horizontal bar per interval, grouped by dimension."""
    span = _extent(barcode)
    left, pad = 40, 6
    plot = width - left - 20
    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
    parts = []
    y = pad
    for k in sorted(barcode.intervals):
        parts.append(f'<text x="4" y="{y + row}" font-size="11" font-family="sans-serif">H{k}</text>')
        for b, d in barcode.bars(k):
            x0 = left + b / span * plot
            x1 = left + (plot if math.isinf(d) else d / span * plot)
            color = colors[k % len(colors)]
            parts.append(f'<rect x="{x0:.2f}" y="{y:.2f}" width="{max(x1 - x0, 1.0):.2f}" '
                         f'height="{row - 3}" fill="{color}"/>')
            y += row
        y += pad
    y += 14
    parts.append(f'<line x1="{left}" y1="{y - 12}" x2="{left + plot}" y2="{y - 12}" stroke="black"/>')
    parts.append(f'<text x="{left}" y="{y}" font-size="10" font-family="sans-serif">0</text>')
    parts.append(f'<text x="{left + plot - 30}" y="{y}" font-size="10" '
                 f'font-family="sans-serif">{span:.3g}</text>')
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{y + pad}" '
            f'viewBox="0 0 {width} {y + pad}">')
    return head + "\n" + "\n".join(parts) + "\n</svg>\n"


def _clean(obj):
    # JSON has no infinity; write it as the string "inf"
    if isinstance(obj, (np.generic, np.ndarray)):
        obj = obj.tolist()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [_clean(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(data) -> str:
    return json.dumps(_clean(data), indent=2) + "\n"


def write_json(data, path) -> None:
    Path(path).write_text(dumps(data))
