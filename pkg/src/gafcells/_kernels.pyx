# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def disc_coverage(const double[::1] xs, const double[::1] ys,
                  const double[::1] cx, const double[::1] cy, double radius):
    """Number of discs covering each sample point (closed discs)."""
    cdef Py_ssize_t n = xs.shape[0], m = cx.shape[0], i, j
    cdef double r2 = radius * radius, dx, dy
    cdef cnp.int32_t c
    out = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[::1] ov = out
    for i in range(n):
        c = 0
        for j in range(m):
            dx = xs[i] - cx[j]
            dy = ys[i] - cy[j]
            if dx * dx + dy * dy <= r2:
                c += 1
        ov[i] = c
    return out


def max_cross_distance(const double[:, ::1] p, const double[:, ::1] q):
    """Largest distance between a point of ``p`` and a point of ``q``."""
    cdef Py_ssize_t n = p.shape[0], m = q.shape[0], i, j
    cdef double best = 0.0, dx, dy, d2, px, py
    for i in range(n):
        px = p[i, 0]
        py = p[i, 1]
        for j in range(m):
            dx = px - q[j, 0]
            dy = py - q[j, 1]
            d2 = dx * dx + dy * dy
            if d2 > best:
                best = d2
    return sqrt(best)


def run_rounds(const cnp.int64_t[::1] cell_of_node, double[::1] energy,
               Py_ssize_t n_cells, const cnp.uint8_t[::1] watched,
               double e_active, double e_sleep, Py_ssize_t max_rounds,
               cnp.int64_t[::1] active_counts, double[::1] consumed):
    """Elect-and-drain loop; stops early after a round that kills a watched cell.

    Returns ``(rounds_done, watched_cell_died)``.
    """
    cdef Py_ssize_t n = cell_of_node.shape[0], i, t, c
    cdef cnp.int64_t[::1] best = np.empty(n_cells, dtype=np.int64)
    cdef cnp.int64_t[::1] alive_cnt = np.zeros(n_cells, dtype=np.int64)
    cdef cnp.int64_t b, n_active
    cdef double e, take, spent
    cdef bint died

    for i in range(n):
        c = cell_of_node[i]
        if c >= 0 and energy[i] > 0.0:
            alive_cnt[c] += 1

    for t in range(max_rounds):
        for c in range(n_cells):
            best[c] = -1
        # node index order is id order, so strict ">" keeps the smallest id on ties
        for i in range(n):
            c = cell_of_node[i]
            if c < 0 or energy[i] <= 0.0:
                continue
            b = best[c]
            if b < 0 or energy[i] > energy[b]:
                best[c] = i
        spent = 0.0
        n_active = 0
        if e_sleep > 0.0:
            for i in range(n):
                e = energy[i]
                if e <= 0.0:
                    continue
                c = cell_of_node[i]
                take = e_active if c >= 0 and best[c] == i else e_sleep
                if take > e:
                    take = e
                energy[i] = e - take
                spent += take
                if c >= 0 and energy[i] <= 0.0:
                    alive_cnt[c] -= 1
        died = False
        for c in range(n_cells):
            b = best[c]
            if b >= 0:
                n_active += 1
                if e_sleep == 0.0:
                    e = energy[b]
                    take = e_active if e_active < e else e
                    energy[b] = e - take
                    spent += take
                    if energy[b] <= 0.0:
                        alive_cnt[c] -= 1
            if watched[c] and alive_cnt[c] == 0:
                died = True
        active_counts[t] = n_active
        consumed[t] = spent
        if died:
            return t + 1, True
    return max_rounds, False
