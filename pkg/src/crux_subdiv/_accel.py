"""Backend switch for the compiled kernels.

Set ``CRUX_SUBDIV_BACKEND=numpy`` to run every kernel as plain Python/numpy.
The default is ``numba`` when it can be imported.
"""

import os

BACKEND = os.environ.get("CRUX_SUBDIV_BACKEND", "numba").strip().lower()

try:  # pragma: no cover - import guard
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = BACKEND == "numba" and numba is not None


def jit(fn):
    """Compile ``fn`` with numba in nopython mode, or return it untouched."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
