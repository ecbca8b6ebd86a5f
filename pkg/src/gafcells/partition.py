"""Cell decompositions of a rectangular sensor field.

Five schemes are supported:

``gaf``
    square ``r x r`` cells, the active node may sit anywhere in its cell.
``hgaf``
    square cells split into ``d x d`` subcells; all cells use the same
    active subcell, which advances row-major one step per round.
``ehgaf``
    square cells whose active subcell is always the central one; the grid
    is slid by ``d`` per epoch to make that possible.
``ehgaf-triangle``
    equilateral triangle cells of height ``r`` with the active subcell at
    the barycenter.
``ehgaf-twotype``
    columns of width ``R``; in every period of ``k`` columns the first
    ``k - 1`` hold type-A cells (``sqrt(3)R`` tall) and the last holds
    type-B cells (half as tall). The B column is shifted down by a quarter
    of an A cell so every other B center is level with the A centers.

``d == 0`` stands for the limit of infinitely fine subcells; the active
subcell then shrinks to a point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field, replace
from enum import Enum

import numpy as np

from .geometry import (
    SQRT3,
    CellShape,
    Point,
    clip_to_rect,
    point_in_convex,
    point_in_shape,
    polygon_area,
    polygon_centroid,
)

__all__ = [
    "Scheme", "FieldSpec", "SchemeParams", "Cell", "Partition", "CellShape",
    "build_partition", "cell_of_point", "cell_indices", "active_position",
    "active_region", "slide_boundaries", "SCHEME_ORDER",
]

_INT_TOL = 1e-9
# a clipped sliver below this fraction of its cell's area is dropped
_SLIVER = 1e-12


class Scheme(str, Enum):
    GAF = "gaf"
    HGAF = "hgaf"
    EHGAF = "ehgaf"
    TRIANGLE = "ehgaf-triangle"
    TWOTYPE = "ehgaf-twotype"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"triangle": cls.TRIANGLE, "twotype": cls.TWOTYPE, "two-type": cls.TWOTYPE,
                   "ehgaf-two-type": cls.TWOTYPE}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown scheme {value!r}") from None


#: Smallest maximal cell first.
SCHEME_ORDER = (Scheme.GAF, Scheme.HGAF, Scheme.EHGAF, Scheme.TRIANGLE, Scheme.TWOTYPE)


@dataclass(frozen=True)
class FieldSpec:
    width: float
    height: float
    radio_range: float = 1.0

    def __post_init__(self):
        for name in ("width", "height", "radio_range"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @property
    def area(self):
        return self.width * self.height


def _as_int(q):
    n = round(q)
    return n if abs(q - n) <= _INT_TOL * max(1.0, abs(q)) else None


@dataclass(frozen=True)
class SchemeParams:
    """Scheme plus its size parameters.

    ``r`` is the square edge (gaf/hgaf/ehgaf), the triangle height
    (ehgaf-triangle), or an optional column width override for
    ehgaf-twotype (0 means the radio range). ``d`` is the subcell edge,
    0 for the infinitesimal limit. ``k`` is the two-type column period.
    """

    scheme: Scheme
    r: float = 0.0
    d: float = 0.0
    k: int = 4

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        s, r, d = self.scheme, self.r, self.d
        if not (math.isfinite(r) and math.isfinite(d)) or d < 0 or r < 0:
            raise ValueError("r and d must be finite and non-negative")
        if s is not Scheme.TWOTYPE and not r > 0:
            raise ValueError(f"{s.value} needs a positive cell size r")
        if s is Scheme.TWOTYPE:
            if int(self.k) != self.k or self.k < 2:
                raise ValueError(f"k must be an integer >= 2, got {self.k}")
            object.__setattr__(self, "k", int(self.k))
            return
        if d == 0 or s is Scheme.GAF:
            return
        q = _as_int(r / d)
        if s is Scheme.HGAF and q is None:
            raise ValueError(f"hgaf requires r divisible by d (r/d = {r / d:g})")
        if s is Scheme.EHGAF and (q is None or q % 2 == 0):
            raise ValueError(f"ehgaf requires r/d to be an odd integer (r/d = {r / d:g})")
        if s is Scheme.TRIANGLE and (q is None or q < 4 or (q - 1) % 3 != 0):
            raise ValueError(f"ehgaf-triangle requires r/d = 3c+1 with c >= 1 (r/d = {r / d:g})")

    @property
    def q(self):
        """Subcells per cell edge (rows of subcells for triangles); None when d == 0."""
        if self.d == 0 or self.scheme in (Scheme.GAF, Scheme.TWOTYPE):
            return None
        return _as_int(self.r / self.d)

    def to_dict(self):
        return {"scheme": self.scheme.value, "r": self.r, "d": self.d, "k": self.k}


@dataclass(frozen=True)
class Cell:
    id: tuple[int, int]
    shape: CellShape
    cell_type: str
    region: tuple[tuple[float, float], ...]
    clipped_area: float

    @property
    def full(self) -> bool:
        """True when the cell lies entirely inside the field."""
        return self.clipped_area >= self.shape.area() * (1 - 1e-9)


@dataclass(frozen=True)
class Partition:
    field: FieldSpec
    params: SchemeParams
    cells: tuple[Cell, ...]
    adjacency: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    grid_offset: Point = Point(0.0, 0.0)
    _index: dict = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.id: i for i, c in enumerate(self.cells)})

    @property
    def scheme(self) -> Scheme:
        return self.params.scheme

    def __len__(self):
        return len(self.cells)

    def index_of(self, cell_id) -> int:
        try:
            return self._index[tuple(cell_id)]
        except KeyError:
            raise KeyError(f"no cell {tuple(cell_id)} in partition") from None

    def cell(self, cell_id) -> Cell:
        return self.cells[self.index_of(cell_id)]

    def neighbors(self, cell_id):
        cid = tuple(cell_id)
        return [b if a == cid else a for a, b in self.adjacency if cid in (a, b)]

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        cells = []
        for c in self.cells:
            entry = {"id": list(c.id), "kind": c.shape.kind, "type": c.cell_type}
            if c.shape.kind == "rectangle":
                entry["origin"] = [c.shape.origin.x, c.shape.origin.y]
                entry["width"] = c.shape.width
                entry["height"] = c.shape.height
            else:
                entry["vertices"] = [list(v) for v in c.shape.vertices()]
            if not c.full:
                entry["clipped_vertices"] = [list(v) for v in c.region]
            cells.append(entry)
        return {
            "field": {"width": self.field.width, "height": self.field.height,
                      "radio_range": self.field.radio_range},
            "scheme": self.scheme.value,
            "params": self.params.to_dict(),
            "cells": cells,
            "adjacency": [[list(a), list(b)] for a, b in self.adjacency],
            "grid_offset": [self.grid_offset.x, self.grid_offset.y],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc) -> "Partition":
        f = doc["field"]
        fs = FieldSpec(f["width"], f["height"], f.get("radio_range", 1.0))
        p = doc["params"]
        params = SchemeParams(p.get("scheme", doc.get("scheme")), p.get("r", 0.0),
                              p.get("d", 0.0), p.get("k", 4))
        off = doc.get("grid_offset", [0.0, 0.0])
        part = build_partition(fs, params, grid_offset=Point(*off))
        if "cells" in doc and len(doc["cells"]) != len(part.cells):
            raise ValueError("partition document does not match its own parameters")
        return part

    @classmethod
    def from_json(cls, text) -> "Partition":
        return cls.from_dict(json.loads(text))


# -- construction -------------------------------------------------------------

def _span(lo_edge, step, limit):
    """Index range of lattice intervals [lo_edge + i*step, +step) overlapping (0, limit)."""
    first = math.floor(-lo_edge / step + _INT_TOL)
    if lo_edge + (first + 1) * step <= 0:
        first += 1
    last = math.ceil((limit - lo_edge) / step - _INT_TOL) - 1
    return range(first, last + 1)


def _make_cell(cid, shape, ctype, fs):
    region = clip_to_rect(shape.vertices(), 0.0, 0.0, fs.width, fs.height)
    area = polygon_area(region)
    if area <= _SLIVER * shape.area():
        return None
    return Cell(cid, shape, ctype, tuple(region), area)


def _build_squares(fs, params, off):
    r = params.r
    cells = []
    for c in _span(off.x, r, fs.width):
        for j in _span(off.y, r, fs.height):
            shape = CellShape.rectangle(off.x + c * r, off.y + j * r, r, r)
            cell = _make_cell((c, j), shape, "uniform", fs)
            if cell is not None:
                cells.append(cell)
    ids = {c.id for c in cells}
    adj = []
    for c, j in sorted(ids):
        for nb in ((c + 1, j), (c, j + 1)):
            if nb in ids:
                adj.append(((c, j), nb))
    return cells, adj


def _tri_row_shift(j, base, off):
    return off.x + (j % 2) * base / 2


def _tri_shape(t, j, h, base, off):
    x_left = _tri_row_shift(j, base, off) + t * base / 2
    y0 = off.y + j * h
    if t % 2 == 0:
        return CellShape.triangle(x_left, y0, base, up=True)
    return CellShape.triangle(x_left, y0 + h, base, up=False)


def _build_triangles(fs, params, off):
    h = params.r
    base = 2 * h / SQRT3
    cells = []
    for j in _span(off.y, h, fs.height):
        s = _tri_row_shift(j, base, off)
        # bounding box of triangle t is [s + t*base/2, s + t*base/2 + base]
        t_first = math.floor(-s / (base / 2)) - 2
        t_last = math.ceil((fs.width - s) / (base / 2)) + 1
        for t in range(t_first, t_last + 1):
            cell = _make_cell((t, j), _tri_shape(t, j, h, base, off), "uniform", fs)
            if cell is not None:
                cells.append(cell)
    ids = {c.id for c in cells}
    adj = []
    for t, j in sorted(ids):
        if (t + 1, j) in ids:
            adj.append(((t, j), (t + 1, j)))
        if t % 2 == 1:
            # down triangle: its top edge is the base of an up triangle one row up
            above = (t - 1, j + 1) if j % 2 == 0 else (t + 1, j + 1)
            if above in ids:
                adj.append(((t, j), above))
    return cells, adj


def _is_b_column(c, k):
    return c % k == k - 1


def _build_twotype(fs, params, off):
    w = params.r
    k = params.k
    ha = SQRT3 * w
    hb = ha / 2
    cells = []
    for c in _span(off.x, w, fs.width):
        x0 = off.x + c * w
        if _is_b_column(c, k):
            for i in _span(off.y - hb / 2, hb, fs.height):
                shape = CellShape.rectangle(x0, off.y + (i - 0.5) * hb, w, hb)
                cell = _make_cell((c, i), shape, "B", fs)
                if cell is not None:
                    cells.append(cell)
        else:
            for j in _span(off.y, ha, fs.height):
                shape = CellShape.rectangle(x0, off.y + j * ha, w, ha)
                cell = _make_cell((c, j), shape, "A", fs)
                if cell is not None:
                    cells.append(cell)
    ids = {c.id for c in cells}
    adj = []
    for c, j in sorted(ids):
        if _is_b_column(c, k):
            if (c, j + 1) in ids:
                adj.append(((c, j), (c, j + 1)))
            continue
        for nc in (c - 1, c + 1):
            if _is_b_column(nc, k):
                nb = (nc, 2 * j + 1)
                if nb in ids and nc > c:
                    adj.append(((c, j), nb))
                elif nb in ids:
                    adj.append((nb, (c, j)))
            elif nc == c + 1 and (nc, j) in ids:
                adj.append(((c, j), (nc, j)))
    adj.sort()
    return cells, adj


def build_partition(field: FieldSpec, params: SchemeParams, grid_offset=Point(0.0, 0.0)) -> Partition:
    """Tile ``field`` with the cells of ``params.scheme``.

    Infeasible sizes are accepted on purpose; the constraints module is what
    decides feasibility. Cells are ordered by ``(column, row)``.
    """
    off = grid_offset if isinstance(grid_offset, Point) else Point(*grid_offset)
    if params.scheme is Scheme.TWOTYPE and params.r == 0:
        params = replace(params, r=field.radio_range)
    if params.scheme in (Scheme.GAF, Scheme.HGAF, Scheme.EHGAF):
        cells, adj = _build_squares(field, params, off)
    elif params.scheme is Scheme.TRIANGLE:
        cells, adj = _build_triangles(field, params, off)
    else:
        cells, adj = _build_twotype(field, params, off)
    cells.sort(key=lambda c: c.id)
    return Partition(field, params, tuple(cells), tuple(adj), off)


def slide_boundaries(partition: Partition, epoch: int) -> Partition:
    """Re-tile with the grid shifted diagonally by ``(epoch mod q) * d``."""
    p = partition.params
    if p.scheme not in (Scheme.EHGAF, Scheme.TRIANGLE):
        raise ValueError(f"boundary sliding is not defined for {p.scheme.value}")
    if p.d == 0:
        raise ValueError("boundary sliding needs d > 0")
    shift = (epoch % p.q) * p.d
    return build_partition(partition.field, p, grid_offset=Point(shift, shift))


# -- lookup -------------------------------------------------------------------

def _pull_inside(xs, ys, fs):
    # points on the far field edges belong to the last row/column
    xs = np.where(xs >= fs.width, np.nextafter(fs.width, 0.0), xs)
    ys = np.where(ys >= fs.height, np.nextafter(fs.height, 0.0), ys)
    return xs, ys


def _lattice_ids(partition, xs, ys):
    """(col, row) lattice coordinates of each point's owning cell."""
    p, off = partition.params, partition.grid_offset
    if p.scheme in (Scheme.GAF, Scheme.HGAF, Scheme.EHGAF):
        return (np.floor((xs - off.x) / p.r).astype(np.int64),
                np.floor((ys - off.y) / p.r).astype(np.int64))
    if p.scheme is Scheme.TWOTYPE:
        w, ha = p.r, SQRT3 * p.r
        hb = ha / 2
        col = np.floor((xs - off.x) / w).astype(np.int64)
        is_b = (col % p.k) == p.k - 1
        row_a = np.floor((ys - off.y) / ha)
        row_b = np.floor((ys - off.y + hb / 2) / hb)
        return col, np.where(is_b, row_b, row_a).astype(np.int64)
    h = p.r
    base = 2 * h / SQRT3
    j = np.floor((ys - off.y) / h).astype(np.int64)
    s = off.x + (j % 2) * base / 2
    t0 = np.floor((xs - s) / (base / 2)).astype(np.int64)
    # the owner is triangle t0 or t0 - 1; test t0 with the half-open rule
    x_left = s + t0 * base / 2
    y0 = off.y + j * h
    up = (t0 % 2) == 0
    rise = (ys - y0) / SQRT3
    drop = (y0 + h - ys) / SQRT3
    in_up = (xs - x_left >= rise) & (x_left + base - xs > rise)
    in_down = (xs - x_left >= drop) & (x_left + base - xs > drop)
    inside = np.where(up, in_up, in_down)
    return np.where(inside, t0, t0 - 1), j


def cell_indices(partition: Partition, xs, ys) -> np.ndarray:
    """Index into ``partition.cells`` for each point; -1 outside the field."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    fs = partition.field
    outside = (xs < 0) | (ys < 0) | (xs > fs.width) | (ys > fs.height)
    xs, ys = _pull_inside(xs, ys, fs)
    col, row = _lattice_ids(partition, xs, ys)
    ids = np.array([c.id for c in partition.cells], dtype=np.int64).reshape(-1, 2)
    c0, r0 = ids[:, 0].min(), ids[:, 1].min()
    table = np.full((ids[:, 0].max() - c0 + 1, ids[:, 1].max() - r0 + 1), -1, dtype=np.int64)
    table[ids[:, 0] - c0, ids[:, 1] - r0] = np.arange(len(ids))
    ci, ri = col - c0, row - r0
    ok = (~outside) & (ci >= 0) & (ri >= 0) & (ci < table.shape[0]) & (ri < table.shape[1])
    out = np.full(xs.shape, -1, dtype=np.int64)
    out[ok] = table[ci[ok], ri[ok]]
    return out


def cell_of_point(partition: Partition, p) -> tuple[int, int]:
    """Id of the cell owning ``p`` under the half-open boundary convention."""
    x, y = p
    fs = partition.field
    if not (0 <= x <= fs.width and 0 <= y <= fs.height):
        raise ValueError(f"point ({x}, {y}) lies outside the {fs.width} x {fs.height} field")
    idx = int(cell_indices(partition, [x], [y])[0])
    if idx < 0:
        # rounding at a lattice line; fall back to an exhaustive search
        xi, yi = _pull_inside(np.array([x]), np.array([y]), fs)
        for cell in partition.cells:
            if point_in_shape(cell.shape, (xi[0], yi[0])):
                return cell.id
        raise ValueError(f"no cell owns point ({x}, {y})")
    return partition.cells[idx].id


# -- active subcells ------------------------------------------------------------

def _canonical_position(partition, cell, rnd):
    p = partition.params
    shape = cell.shape
    if p.scheme is Scheme.HGAF and p.d > 0:
        q = p.q
        k = rnd % (q * q)
        row, col = divmod(k, q)
        return Point(shape.origin.x + (col + 0.5) * p.d, shape.origin.y + (row + 0.5) * p.d)
    if p.scheme is Scheme.GAF:
        return polygon_centroid(cell.region)
    return shape.centroid()


def active_position(partition: Partition, cell_id, round: int = 0) -> Point:
    """Reference position of the cell's active node in ``round``.

    Clipped border cells fall back to the centroid of their clipped region
    when the canonical position lies outside the field.
    """
    if round < 0:
        raise ValueError("round must be >= 0")
    cell = partition.cell(cell_id)
    pos = _canonical_position(partition, cell, round)
    if not cell.full and not point_in_convex(cell.region, pos):
        return polygon_centroid(cell.region)
    return pos


def _central_subtriangle(shape, d):
    g = shape.centroid()
    b = 2 * d / SQRT3
    if shape.kind == "triangle-up":
        return [(g.x - b / 2, g.y - d / 3), (g.x + b / 2, g.y - d / 3), (g.x, g.y + 2 * d / 3)]
    return [(g.x, g.y - 2 * d / 3), (g.x + b / 2, g.y + d / 3), (g.x - b / 2, g.y + d / 3)]


def active_region(partition: Partition, cell_id, round: int = 0) -> list[tuple[float, float]]:
    """Convex region where the active node of ``cell_id`` may sit in ``round``.

    A single vertex means a point (the ``d == 0`` limit, or two-type cells).
    GAF places no restriction, so the region is the whole clipped cell.
    """
    cell = partition.cell(cell_id)
    p = partition.params
    fs = partition.field
    if p.scheme is Scheme.GAF:
        return list(cell.region)
    if p.scheme is Scheme.TWOTYPE or p.d == 0:
        return [tuple(active_position(partition, cell_id, round))]
    if p.scheme is Scheme.TRIANGLE:
        poly = _central_subtriangle(cell.shape, p.d)
    else:
        c = _canonical_position(partition, cell, round)
        h = p.d / 2
        poly = [(c.x - h, c.y - h), (c.x + h, c.y - h), (c.x + h, c.y + h), (c.x - h, c.y + h)]
    clipped = clip_to_rect(poly, 0.0, 0.0, fs.width, fs.height)
    if polygon_area(clipped) <= 0:
        return [tuple(active_position(partition, cell_id, round))]
    return clipped
