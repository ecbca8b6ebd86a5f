"""Pure-Python (numpy) versions of the compiled kernels in ``_kernels.pyx``.

Results match the compiled versions for the same inputs (per-round energy
totals may differ in the last ulp from summation order); the test suite
runs both against each other.
"""

import numpy as np

_CHUNK = 4096


def disc_coverage(xs, ys, cx, cy, radius):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    out = np.zeros(xs.shape[0], dtype=np.int32)
    r2 = radius * radius
    for x0, y0 in zip(np.asarray(cx, dtype=np.float64), np.asarray(cy, dtype=np.float64)):
        dx = xs - x0
        dy = ys - y0
        out += (dx * dx + dy * dy <= r2)
    return out


def max_cross_distance(p, q):
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    best = 0.0
    for start in range(0, p.shape[0], _CHUNK):
        blk = p[start:start + _CHUNK]
        dx = blk[:, 0:1] - q[None, :, 0]
        dy = blk[:, 1:2] - q[None, :, 1]
        d2 = dx * dx + dy * dy
        if d2.size:
            best = max(best, float(d2.max()))
    return float(np.sqrt(best))


def run_rounds(cell_of_node, energy, n_cells, watched, e_active, e_sleep,
               max_rounds, active_counts, consumed):
    cell_of_node = np.asarray(cell_of_node, dtype=np.int64)
    watched = np.asarray(watched, dtype=bool)
    n = cell_of_node.shape[0]
    ids = np.arange(n)
    in_cell = cell_of_node >= 0

    for t in range(max_rounds):
        alive = energy > 0.0
        cand = alive & in_cell
        cells = cell_of_node[cand]
        e_c = energy[cand]
        top = np.full(n_cells, -np.inf)
        np.maximum.at(top, cells, e_c)
        at_top = e_c == top[cells]
        winner = np.full(n_cells, n, dtype=np.int64)
        np.minimum.at(winner, cells[at_top], ids[cand][at_top])

        is_active = np.zeros(n, dtype=bool)
        chosen = winner[winner < n]
        is_active[chosen] = True
        take = np.where(is_active, e_active, e_sleep)
        take = np.where(alive, np.minimum(take, energy), 0.0)
        energy -= take
        active_counts[t] = chosen.shape[0]
        consumed[t] = float(take.sum())

        alive_cnt = np.bincount(cell_of_node[in_cell & (energy > 0.0)], minlength=n_cells)
        if np.any(watched & (alive_cnt[:n_cells] == 0)):
            return t + 1, True
    return max_rounds, False
