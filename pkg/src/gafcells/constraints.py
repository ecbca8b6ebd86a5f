"""Communication requirements for each scheme.

Req I (or the horizontal-only relaxation used by the two-type layout):
active nodes of linked cells must be within radio range of each other.
Req II: an active node must reach every point of its own cell.

Worst-case distances are provided in closed form and, independently, by a
sampling oracle over the actual partition geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from . import kernels
from .geometry import (
    REL_TOL,
    SQRT3,
    Point,
    distance,
    point_in_convex,
    polygon_centroid,
    sample_boundary,
)
from .partition import Partition, Scheme, SchemeParams, active_region

REQ_I = "ReqI"
REQ_II = "ReqII"
BOTH = "both"
NONE = "none"


class IncompleteInputError(ValueError):
    """An adjacency pair references a cell with no active position."""


def _within(value, R):
    return value <= R * (1 + REL_TOL)


def binding_of(req1, req2, R):
    """Which requirements sit at (or beyond) the radio range."""
    t1 = req1 >= R * (1 - REL_TOL)
    t2 = req2 >= R * (1 - REL_TOL)
    if t1 and t2:
        return BOTH
    return REQ_I if t1 else REQ_II if t2 else NONE


@dataclass(frozen=True)
class ReqReport:
    scheme: Scheme
    params: SchemeParams
    radio_range: float
    req1_worst: float
    req2_worst: float
    feasible: bool
    binding_constraint: str

    @classmethod
    def from_worst(cls, params, R, req1, req2):
        return cls(params.scheme, params, R, req1, req2,
                   _within(req1, R) and _within(req2, R), binding_of(req1, req2, R))

    def to_dict(self):
        return {
            "scheme": self.scheme.value,
            "params": self.params.to_dict(),
            "radio_range": self.radio_range,
            "req1_worst": self.req1_worst,
            "req2_worst": self.req2_worst,
            "feasible": self.feasible,
            "binding_constraint": self.binding_constraint,
        }


def _column_width(params, R):
    return params.r if params.r > 0 else R


def worst_adjacent_distance(params: SchemeParams, R: float) -> float:
    """Largest possible distance between active nodes of two linked cells."""
    r, d = params.r, params.d
    s = params.scheme
    if s is Scheme.GAF:
        return r * math.sqrt(5)
    if s in (Scheme.HGAF, Scheme.EHGAF):
        return math.hypot(d, r + d)
    if s is Scheme.TRIANGLE:
        # barycenter-to-shared-edge distance is r/3, subcell circumradius 2d/3
        return 2 * (r + 2 * d) / 3
    w = _column_width(params, R)
    return max(w, SQRT3 / 2 * w)


def worst_intracell_distance(params: SchemeParams, R: float) -> float:
    """Largest possible distance from an active node to a point of its cell."""
    r, d = params.r, params.d
    s = params.scheme
    if s in (Scheme.GAF, Scheme.HGAF):
        return r * math.sqrt(2)
    if s is Scheme.EHGAF:
        return math.sqrt(2) * (r + d) / 2
    if s is Scheme.TRIANGLE:
        return 2 / 3 * math.sqrt(r * r + r * d + d * d)
    w = _column_width(params, R)
    return math.hypot(SQRT3 * w, w) / 2


def analytic_report(params: SchemeParams, R: float) -> ReqReport:
    return ReqReport.from_worst(params, R, worst_adjacent_distance(params, R),
                                worst_intracell_distance(params, R))


class MaxDims(NamedTuple):
    r_max: float
    cell_area: float
    binding: str


def _pick(r_req1, r_req2):
    if math.isclose(r_req1, r_req2, rel_tol=REL_TOL):
        return r_req1, BOTH
    return (r_req1, REQ_I) if r_req1 < r_req2 else (r_req2, REQ_II)


def max_cell_dims(scheme, d: float, R: float) -> MaxDims:
    """Largest cell size meeting both requirements for subcell size ``d``.

    For the two-type layout ``r_max`` is the column width and ``cell_area``
    the type-A area; the type-B cell is half of it.
    """
    scheme = Scheme.parse(scheme)
    if not R > 0:
        raise ValueError("R must be positive")
    if d < 0 or not math.isfinite(d):
        raise ValueError(f"invalid subcell size d={d}")
    if scheme is Scheme.GAF:
        r = R / math.sqrt(5)
        return MaxDims(r, r * r, REQ_I)
    if scheme is Scheme.TWOTYPE:
        return MaxDims(R, SQRT3 * R * R, BOTH)
    if d >= R:
        raise ValueError(f"subcell size d={d} leaves no feasible cell for R={R}")
    if scheme is Scheme.HGAF:
        r, b = _pick(math.sqrt(R * R - d * d) - d, R / math.sqrt(2))
    elif scheme is Scheme.EHGAF:
        r, b = _pick(math.sqrt(R * R - d * d) - d, math.sqrt(2) * R - d)
    else:
        r, b = _pick(1.5 * R - 2 * d, (math.sqrt(9 * R * R - 3 * d * d) - d) / 2)
    if r <= 0:
        raise ValueError(f"subcell size d={d} leaves no feasible cell for R={R}")
    area = r * r / SQRT3 if scheme is Scheme.TRIANGLE else r * r
    return MaxDims(r, area, b)


def max_params(scheme, R: float = 1.0, k: int = 4) -> SchemeParams:
    """Scheme parameters at their maximal feasible size with ``d = 0``."""
    scheme = Scheme.parse(scheme)
    if scheme is Scheme.TWOTYPE:
        return SchemeParams(scheme, k=k)
    return SchemeParams(scheme, max_cell_dims(scheme, 0.0, R).r_max)


# -- checking concrete placements -----------------------------------------------

def _farthest_vertex(region, p):
    return max(distance(p, v) for v in region)


def check_requirements(partition: Partition, active_positions: Mapping, R: float) -> ReqReport:
    """Evaluate both requirements for one concrete set of active positions.

    ``active_positions`` maps cell id to a point; ``None`` marks an empty cell.
    A cell missing from the mapping while it takes part in a required link
    raises :class:`IncompleteInputError`.
    """
    pos = {tuple(k): v for k, v in active_positions.items()}
    req1 = 0.0
    for a, b in partition.adjacency:
        if a not in pos or b not in pos:
            missing = a if a not in pos else b
            raise IncompleteInputError(f"no active position given for cell {missing}")
        pa, pb = pos[a], pos[b]
        if pa is None or pb is None:
            continue
        req1 = max(req1, distance(pa, pb))
    req2 = 0.0
    for cell in partition.cells:
        p = pos.get(cell.id)
        if p is not None:
            req2 = max(req2, _farthest_vertex(cell.region, p))
    return ReqReport.from_worst(partition.params, R, req1, req2)


def worst_case_actives(partition: Partition, round: int = 0) -> dict:
    """An adversarial but legal placement of active nodes.

    Every active sits at the vertex of its allowed region that is farthest
    from its own cell, then one linked pair is moved to the two region
    vertices that are farthest apart. For HGAF with point subcells the
    shared position is put in a cell corner, the worst synchronous choice.
    """
    p = partition.params
    regions = {}
    for cell in partition.cells:
        if p.scheme is Scheme.HGAF and p.d == 0:
            regions[cell.id] = [tuple(cell.shape.origin)]
        else:
            regions[cell.id] = active_region(partition, cell.id, round)
    pos = {}
    for cell in partition.cells:
        best = max(regions[cell.id], key=lambda v: _farthest_vertex(cell.region, v))
        pos[cell.id] = Point(*best)
    best_pair, best_d = None, -1.0
    for a, b in partition.adjacency:
        for va in regions[a]:
            for vb in regions[b]:
                dd = distance(va, vb)
                if dd > best_d + 1e-15:
                    best_pair, best_d = (a, b, va, vb), dd
    if best_pair is not None:
        a, b, va, vb = best_pair
        pos[a], pos[b] = Point(*va), Point(*vb)
    return pos


# -- sampling oracle -----------------------------------------------------------

def _sync_offsets(count):
    # m x m grid of relative positions, corners always included
    m = max(2, math.ceil(math.sqrt(count)))
    g = np.linspace(0.0, 1.0, m)
    return [(fx, fy) for fy in g for fx in g]


def _rounds(partition, rounds_to_check):
    p = partition.params
    if p.scheme is Scheme.HGAF:
        if p.d > 0:
            period = p.q * p.q
            n = period if rounds_to_check is None else min(rounds_to_check, period)
            return list(range(n))
        return _sync_offsets(9 if rounds_to_check is None else rounds_to_check)
    return [0]


def _region_samples(partition, cell, rnd, resolution):
    p = partition.params
    if p.scheme is Scheme.HGAF and p.d == 0:
        fx, fy = rnd
        o = cell.shape.origin
        pt = (o.x + fx * p.r, o.y + fy * p.r)
        if not point_in_convex(cell.region, pt):
            pt = tuple(polygon_centroid(cell.region))
        return np.array([pt], dtype=float)
    region = active_region(partition, cell.id, rnd)
    if len(region) == 1:
        return np.array(region, dtype=float)
    return sample_boundary(region, resolution)


def brute_force_worst_distances(partition: Partition, resolution: float,
                                rounds_to_check: int | None = None) -> tuple[float, float]:
    """Sampled worst-case distances ``(req1, req2)`` over the partition.

    Cells and active regions are convex, so the farthest pair of points
    between two of them lies on their boundaries; both are sampled along
    the boundary at spacing ``<= resolution`` (vertices included). HGAF is
    checked over a full rotation (``d > 0``) or over ``rounds_to_check``
    synchronous positions on a grid that includes the corners (``d = 0``).
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    cell_pts = {c.id: sample_boundary(c.region, resolution) for c in partition.cells}
    req1 = req2 = 0.0
    for rnd in _rounds(partition, rounds_to_check):
        act = {c.id: _region_samples(partition, c, rnd, resolution) for c in partition.cells}
        for a, b in partition.adjacency:
            req1 = max(req1, kernels.max_cross_distance(act[a], act[b]))
        for c in partition.cells:
            req2 = max(req2, kernels.max_cross_distance(act[c.id], cell_pts[c.id]))
    return req1, req2
