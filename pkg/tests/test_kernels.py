import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gafcells import _kernels_py, kernels

compiled = pytest.importorskip("gafcells._kernels")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from gafcells import kernels; print(kernels.BACKEND)"],
        env={**os.environ, "GAFCELLS_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.floats(0.1, 2))
def test_disc_coverage_parity(seed, m, radius):
    rng = np.random.default_rng(seed)
    xs, ys = rng.uniform(-2, 2, 500), rng.uniform(-2, 2, 500)
    cx, cy = rng.uniform(-1, 1, m), rng.uniform(-1, 1, m)
    a = compiled.disc_coverage(xs, ys, cx, cy, radius)
    b = _kernels_py.disc_coverage(xs, ys, cx, cy, radius)
    assert np.array_equal(a, b)
    # plain distance oracle
    d2 = (xs[:, None] - cx) ** 2 + (ys[:, None] - cy) ** 2
    assert np.array_equal(a, (d2 <= radius * radius).sum(axis=1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 300), st.integers(1, 300))
def test_max_cross_distance_parity(seed, n, m):
    rng = np.random.default_rng(seed)
    p = np.ascontiguousarray(rng.normal(size=(n, 2)))
    q = np.ascontiguousarray(rng.normal(size=(m, 2)))
    ref = np.sqrt(((p[:, None, :] - q[None, :, :]) ** 2).sum(-1)).max()
    assert compiled.max_cross_distance(p, q) == pytest.approx(ref, rel=1e-14)
    assert _kernels_py.max_cross_distance(p, q) == pytest.approx(ref, rel=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.0, 0.05, 0.3]), st.integers(1, 12))
def test_run_rounds_parity(seed, e_sleep, n_cells):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 400))
    cell = rng.integers(-1, n_cells, n).astype(np.int64)
    energy = rng.integers(1, 40, n) / 4.0
    watched = (rng.random(n_cells) < 0.7).astype(np.uint8)
    outs = []
    for mod in (compiled, _kernels_py):
        e = energy.copy()
        ac = np.zeros(300, dtype=np.int64)
        co = np.zeros(300)
        done, died = mod.run_rounds(cell, e, n_cells, watched, 1.0, e_sleep, 300, ac, co)
        outs.append((done, died, e, ac, co))
    (d1, x1, e1, a1, c1), (d2, x2, e2, a2, c2) = outs
    assert (d1, x1) == (d2, x2)
    assert np.array_equal(a1, a2)
    assert np.allclose(e1, e2, rtol=0, atol=1e-12)
    assert np.allclose(c1, c2, rtol=0, atol=1e-9)
    for e, c in ((e1, c1), (e2, c2)):
        assert energy.sum() - e.sum() == pytest.approx(c.sum(), abs=1e-9)
