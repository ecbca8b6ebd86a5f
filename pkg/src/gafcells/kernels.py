"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Set ``GAFCELLS_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("GAFCELLS_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import disc_coverage, max_cross_distance, run_rounds
else:
    try:
        from ._kernels import disc_coverage, max_cross_distance, run_rounds
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import disc_coverage, max_cross_distance, run_rounds

__all__ = ["BACKEND", "disc_coverage", "max_cross_distance", "run_rounds"]
