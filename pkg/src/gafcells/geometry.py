"""Planar primitives: points, discs, cell shapes, lens and disc-union areas."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels

SQRT3 = math.sqrt(3.0)

#: Relative tolerance used for every comparison against the radio range.
REL_TOL = 1e-9

# Monte Carlo draws are generated in fixed-size chunks, each from its own
# child seed, so results do not depend on how chunks are scheduled.
MC_CHUNK = 1 << 18


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Disc:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disc radius must be positive, got {self.radius}")


RECTANGLE = "rectangle"
TRIANGLE_UP = "triangle-up"
TRIANGLE_DOWN = "triangle-down"


@dataclass(frozen=True)
class CellShape:
    """Extent of one cell.

    Rectangles are given by their lower-left ``origin`` plus ``width`` and
    ``height``. Triangles are equilateral; ``origin`` is the left end of the
    horizontal edge (the base for ``triangle-up``, the top edge for
    ``triangle-down``) and ``width`` is the edge length.
    """

    kind: str
    origin: Point
    width: float
    height: float = 0.0

    def __post_init__(self):
        if self.kind not in (RECTANGLE, TRIANGLE_UP, TRIANGLE_DOWN):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.kind != RECTANGLE:
            object.__setattr__(self, "height", self.width * SQRT3 / 2)
        if not (self.width > 0 and self.height > 0):
            raise ValueError("shape extents must be positive")

    @classmethod
    def rectangle(cls, x, y, width, height):
        return cls(RECTANGLE, Point(x, y), width, height)

    @classmethod
    def triangle(cls, x, y, base, up=True):
        return cls(TRIANGLE_UP if up else TRIANGLE_DOWN, Point(x, y), base)

    @property
    def is_triangle(self):
        return self.kind != RECTANGLE

    def vertices(self) -> list[tuple[float, float]]:
        """Counter-clockwise vertex list."""
        x, y = self.origin
        w, h = self.width, self.height
        if self.kind == RECTANGLE:
            return [(x, y), (x + w, y), (x + w, y + h), (x, y + h)]
        if self.kind == TRIANGLE_UP:
            return [(x, y), (x + w, y), (x + w / 2, y + h)]
        return [(x + w / 2, y - h), (x + w, y), (x, y)]

    def centroid(self) -> Point:
        vs = self.vertices()
        return Point(sum(v[0] for v in vs) / len(vs), sum(v[1] for v in vs) / len(vs))

    def area(self) -> float:
        return self.width * self.height if self.kind == RECTANGLE else self.width * self.height / 2

    def bbox(self) -> tuple[float, float, float, float]:
        vs = self.vertices()
        xs = [v[0] for v in vs]
        ys = [v[1] for v in vs]
        return min(xs), min(ys), max(xs), max(ys)

    def translated(self, dx, dy) -> "CellShape":
        return CellShape(self.kind, Point(self.origin.x + dx, self.origin.y + dy),
                         self.width, self.height)


def distance(p, q) -> float:
    """Euclidean distance between two points (anything unpacking to ``x, y``)."""
    px, py = p
    qx, qy = q
    return math.hypot(px - qx, py - qy)


def lens_area(radius: float, center_distance: float) -> float:
    """Area of the intersection of two discs of equal ``radius``."""
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if center_distance < 0:
        raise ValueError(f"center distance must be non-negative, got {center_distance}")
    r, d = radius, center_distance
    if d >= 2 * r:
        return 0.0
    return 2 * r * r * math.acos(d / (2 * r)) - (d / 2) * math.sqrt(4 * r * r - d * d)


#: Half-width of the band around an edge inside which a point counts as lying
#: on it. Neighbouring cells hold their shared edge with slightly different
#: rounding, so exact comparisons could give an on-edge point two owners.
EDGE_TOL = 1e-12


def _edge_tol(shape):
    ox, oy = shape.origin
    return EDGE_TOL * max(1.0, abs(ox), abs(oy), shape.width)


def point_in_shape(shape: CellShape, p) -> bool:
    """Half-open membership test.

    Rectangles own their left and bottom edges. An upward triangle owns its
    base and its left edge; a downward triangle owns only its left edge.
    With these rules every point of a tiling has exactly one owner.
    """
    x, y = p
    return bool(points_in_shape(shape, np.array([x], dtype=float), np.array([y], dtype=float))[0])


def points_in_shape(shape: CellShape, xs, ys) -> np.ndarray:
    """Vectorised :func:`point_in_shape`."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ox, oy = shape.origin
    w, h = shape.width, shape.height
    eps = _edge_tol(shape)
    if shape.kind == RECTANGLE:
        return (xs >= ox - eps) & (xs < ox + w - eps) & (ys >= oy - eps) & (ys < oy + h - eps)
    if shape.kind == TRIANGLE_UP:
        rise = (ys - oy) / SQRT3
        return (ys >= oy - eps) & (xs - ox - rise >= -eps) & ((ox + w) - xs - rise > eps)
    drop = (oy - ys) / SQRT3
    return (ys < oy - eps) & (xs - ox - drop >= -eps) & ((ox + w) - xs - drop > eps)


# -- convex polygons ---------------------------------------------------------

def clip_to_rect(poly, x0, y0, x1, y1) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip of a convex polygon against an axis-aligned box."""

    def clip(pts, inside, cross):
        out = []
        for i, cur in enumerate(pts):
            prev = pts[i - 1]
            if inside(cur):
                if not inside(prev):
                    out.append(cross(prev, cur))
                out.append(cur)
            elif inside(prev):
                out.append(cross(prev, cur))
        return out

    def at_x(xc):
        def f(a, b):
            t = (xc - a[0]) / (b[0] - a[0])
            return (xc, a[1] + t * (b[1] - a[1]))
        return f

    def at_y(yc):
        def f(a, b):
            t = (yc - a[1]) / (b[1] - a[1])
            return (a[0] + t * (b[0] - a[0]), yc)
        return f

    pts = list(poly)
    for inside, cross in (
        (lambda p: p[0] >= x0, at_x(x0)),
        (lambda p: p[0] <= x1, at_x(x1)),
        (lambda p: p[1] >= y0, at_y(y0)),
        (lambda p: p[1] <= y1, at_y(y1)),
    ):
        if not pts:
            break
        pts = clip(pts, inside, cross)
    return pts


def polygon_area(poly) -> float:
    n = len(poly)
    if n < 3:
        return 0.0
    s = 0.0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def polygon_centroid(poly) -> Point:
    a = 0.0
    cx = cy = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        cr = x0 * y1 - x1 * y0
        a += cr
        cx += (x0 + x1) * cr
        cy += (y0 + y1) * cr
    if abs(a) < 1e-300:
        return Point(sum(p[0] for p in poly) / n, sum(p[1] for p in poly) / n)
    return Point(cx / (3 * a), cy / (3 * a))


def point_in_convex(poly, p, tol=1e-12) -> bool:
    """Closed membership in a counter-clockwise convex polygon."""
    x, y = p
    n = len(poly)
    scale = max(1.0, max(abs(c) for v in poly for c in v))
    for i in range(n):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % n]
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < -tol * scale * scale:
            return False
    return True


def sample_boundary(poly, pitch) -> np.ndarray:
    """Points along a closed polygon boundary, vertices included, spacing <= pitch."""
    pts = []
    n = len(poly)
    for i in range(n):
        a = np.asarray(poly[i], dtype=float)
        b = np.asarray(poly[(i + 1) % n], dtype=float)
        steps = max(1, int(math.ceil(np.hypot(*(b - a)) / pitch)))
        t = np.arange(steps)[:, None] / steps
        pts.append(a + t * (b - a))
    if not pts:
        return np.empty((0, 2))
    return np.ascontiguousarray(np.vstack(pts))


# -- Monte Carlo area estimates -----------------------------------------------

class MCEstimate(NamedTuple):
    area: float
    std_error: float


def uniform_samples(bbox, samples, seed):
    """Yield ``(xs, ys)`` chunks of uniform points in ``bbox``, deterministic per seed."""
    x0, y0, x1, y1 = bbox
    n_chunks = -(-samples // MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for i, child in enumerate(children):
        m = min(MC_CHUNK, samples - i * MC_CHUNK)
        rng = np.random.default_rng(child)
        yield rng.uniform(x0, x1, m), rng.uniform(y0, y1, m)


def _centers_bbox(centers, radius):
    c = np.asarray(centers, dtype=float).reshape(-1, 2)
    return (c[:, 0].min() - radius, c[:, 1].min() - radius,
            c[:, 0].max() + radius, c[:, 1].max() + radius), c


def disc_coverage_mc(centers, radius, samples, seed, min_cover=1):
    """Estimate the area covered by at least ``min_cover`` of the discs.

    Points are drawn uniformly from the bounding box of the disc set.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    bbox, c = _centers_bbox(centers, radius)
    cx = np.ascontiguousarray(c[:, 0])
    cy = np.ascontiguousarray(c[:, 1])
    hits = 0
    for xs, ys in uniform_samples(bbox, samples, seed):
        cover = kernels.disc_coverage(xs, ys, cx, cy, radius)
        hits += int(np.count_nonzero(cover >= min_cover))
    box = (bbox[2] - bbox[0]) * (bbox[3] - bbox[1])
    frac = hits / samples
    return MCEstimate(box * frac, box * math.sqrt(frac * (1 - frac) / samples))


def disc_union_area_mc(centers: Sequence, radius: float, samples: int, seed: int) -> MCEstimate:
    return disc_coverage_mc(centers, radius, samples, seed, min_cover=1)


def chain_centers(n, spacing):
    return [(i * spacing, 0.0) for i in range(n)]


def chain_union_area_mc(n: int, spacing: float, radius: float, samples: int, seed: int) -> float:
    """Monte Carlo area of the union of ``n`` discs centred at ``(i*spacing, 0)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spacing < 0:
        raise ValueError("spacing must be non-negative")
    return disc_union_area_mc(chain_centers(n, spacing), radius, samples, seed).area


def lens_area_mc(radius: float, center_distance: float, samples: int, seed: int) -> MCEstimate:
    """Monte Carlo estimate of :func:`lens_area`, used as its independent check."""
    return disc_coverage_mc([(0.0, 0.0), (center_distance, 0.0)], radius, samples, seed,
                            min_cover=2)
