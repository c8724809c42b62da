"""Kernel backend selection.

The environment variable WINDHIT_BACKEND picks the implementation:
  * "numba"  — compiled kernels (error if numba is unavailable);
  * "numpy"  — pure-numpy kernels;
  * unset/"" — numba when importable, numpy otherwise.

Both backends consume identical per-path counter streams; see
`_kernels_numpy` for the exact equivalence contract.
"""

import os


def _load():
    choice = os.environ.get("WINDHIT_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            "WINDHIT_BACKEND must be 'numba', 'numpy', or unset; got %r"
            % choice)
    if choice == "numpy":
        from . import _kernels_numpy as mod
        return mod, "numpy"
    try:
        from . import _kernels_numba as mod
        return mod, "numba"
    except ImportError:
        if choice == "numba":
            raise
        from . import _kernels_numpy as mod
        return mod, "numpy"


kernels, BACKEND_NAME = _load()


def set_num_threads(n: int) -> None:
    """Set the kernel thread count, clamped to the launch-time maximum
    (no-op on the numpy backend).  Results never depend on this value —
    every sample owns a fixed RNG stream regardless of scheduling."""
    if BACKEND_NAME == "numba":
        import numba
        cap = numba.config.NUMBA_NUM_THREADS
        numba.set_num_threads(min(max(1, int(n)), cap))
