"""Closed-form cell-size bounds and their Monte Carlo cross-checks.

Two radius-``R`` discs whose centers are ``R`` apart overlap in a lens of
area ``delta(R) = (4*pi - 3*sqrt(3))/6 * R**2``. A chain of ``n`` such discs
covers ``n*pi*R**2 - (n-1)*delta``, which caps the average cell area at
``pi*R**2 - delta`` as ``n`` grows. The chain bound is checked
constructively: the extremal chain is shown to attain it, and each added
disc to add exactly ``pi*R**2 - delta``. No claim is checked over all
possible field shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import SQRT3, chain_centers, uniform_samples
from .partition import SCHEME_ORDER, Scheme

#: Published lifetime percentages, rounded to whole points.
PUBLISHED_LIFETIME_PCT = {
    Scheme.GAF: 11, Scheme.HGAF: 26, Scheme.EHGAF: 52,
    Scheme.TRIANGLE: 68, Scheme.TWOTYPE: 91, "bound": 100,
}


def _check_R(R):
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")


def delta(R: float) -> float:
    _check_R(R)
    return (4 * math.pi - 3 * SQRT3) / 6 * R * R


def chain_max_area(n: int, R: float) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * math.pi * R * R - (n - 1) * delta(R)


def avg_cell_bound(n, R: float) -> float:
    """Average cell area bound for ``n`` cells; ``n=math.inf`` gives the limit."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if math.isinf(n):
        return math.pi * R * R - delta(R)
    return math.pi * R * R - (n - 1) / n * delta(R)


def upper_bound(R: float) -> float:
    return avg_cell_bound(math.inf, R)


def scheme_max_area(scheme, R: float) -> float:
    _check_R(R)
    s = Scheme.parse(scheme)
    factor = {
        Scheme.GAF: 1 / 5,
        Scheme.HGAF: 1 / 2,
        Scheme.EHGAF: 1.0,
        Scheme.TRIANGLE: 3 * SQRT3 / 4,
        Scheme.TWOTYPE: SQRT3,
    }[s]
    return factor * R * R


def gaf_alt_shape_area(shape: str, R: float) -> float:
    """Maximal GAF cell area with triangle or hexagon cells."""
    if shape == "triangle":
        return R * R / (4 * SQRT3)
    if shape == "hexagon":
        return 3 * SQRT3 / 26 * R * R
    raise ValueError(f"shape must be 'triangle' or 'hexagon', got {shape!r}")


def two_type_avg_area(k, R: float) -> float:
    """Mean cell area when every ``k``-th column holds half-height cells."""
    if math.isinf(k):
        return SQRT3 * R * R
    if k < 2 or int(k) != k:
        raise ValueError(f"k must be an integer >= 2, got {k}")
    return SQRT3 * k * R * R / (k + 1)


def lifetime_pct(area: float, R: float) -> float:
    """Cell area as a percentage of the asymptotic bound."""
    return 100.0 * area / upper_bound(R)


def table_rows(R: float = 1.0):
    """Analytic rows of both tables: scheme, max area, percentage of bound, published figure."""
    rows = []
    for s in SCHEME_ORDER:
        a = scheme_max_area(s, R)
        rows.append((s.value, a, lifetime_pct(a, R), PUBLISHED_LIFETIME_PCT[s]))
    rows.append(("bound", upper_bound(R), 100.0, PUBLISHED_LIFETIME_PCT["bound"]))
    return rows


@dataclass(frozen=True)
class ChainReport:
    n: int
    radius: float
    spacing: float
    analytic: float
    estimate: float
    std_error: float
    increment: float
    increment_std_error: float
    increment_target: float
    linked: bool
    pass_: bool

    def to_dict(self):
        d = dict(self.__dict__)
        d["pass"] = d.pop("pass_")
        return d


def verify_chain_construction(n: int, R: float, samples: int, seed: int,
                              spacing: float | None = None) -> ChainReport:
    """Monte Carlo check that the extremal chain attains the chain bound.

    The same sample points are scored against the first ``n-1`` discs and
    against all ``n``, so the increment estimate is paired. ``spacing``
    defaults to ``R``; discs farther apart than ``R`` cannot host linked
    active nodes, and the report then fails regardless of the estimate.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_R(R)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    s = R if spacing is None else spacing
    centers = np.array(chain_centers(n, s))
    bbox = (-R, -R, (n - 1) * s + R, R)
    box = (bbox[2] - bbox[0]) * (bbox[3] - bbox[1])
    cx = np.ascontiguousarray(centers[:, 0])
    cy = np.ascontiguousarray(centers[:, 1])
    hit_n = hit_prev = 0
    for xs, ys in uniform_samples(bbox, samples, seed):
        cover_all = kernels.disc_coverage(xs, ys, cx, cy, R)
        cover_prev = kernels.disc_coverage(xs, ys, cx[:-1], cy[:-1], R)
        hit_n += int(np.count_nonzero(cover_all))
        hit_prev += int(np.count_nonzero(cover_prev))
    f = hit_n / samples
    est = box * f
    se = box * math.sqrt(f * (1 - f) / samples)
    # a point covered by the first n-1 discs is covered by all n, so the
    # increment indicator is simply hit_n - hit_prev
    g = (hit_n - hit_prev) / samples
    inc = box * g
    inc_se = box * math.sqrt(g * (1 - g) / samples)
    analytic = chain_max_area(n, R)
    target = math.pi * R * R - delta(R)
    linked = s <= R * (1 + 1e-9)
    ok = (linked and abs(est - analytic) <= 3 * se and abs(inc - target) <= 3 * inc_se)
    return ChainReport(n, R, s, analytic, est, se, inc, inc_se, target, linked, ok)

