"""Kernel backend selection.

The compiled Cython core (``_ckernels``) is preferred when built; the numpy
reference backend is the fallback.  ``RNMOMENTS_BACKEND`` forces the choice:
``c`` (error if the extension is missing), ``py``, or ``auto`` (default).
Both backends implement identical contracts; ``available_backends`` lets
tests and benchmarks run them side by side.
"""

import os

from . import py_backend

_choice = os.environ.get("RNMOMENTS_BACKEND", "auto").strip().lower() or "auto"

if _choice in ("auto", "c"):
    try:
        from . import _ckernels as _impl

        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise ImportError(
                "RNMOMENTS_BACKEND=c but the compiled kernel extension is not built"
            )
        _impl = py_backend
        BACKEND = "py"
elif _choice in ("py", "python"):
    _impl = py_backend
    BACKEND = "py"
else:
    raise ValueError(f"unrecognized RNMOMENTS_BACKEND value {_choice!r}")

basis_table = _impl.basis_table
cholesky_lower = _impl.cholesky_lower
solve_lower = _impl.solve_lower
solve_lower_t = _impl.solve_lower_t
jacobi_eigh = _impl.jacobi_eigh
image_sums = _impl.image_sums
quadform_points = _impl.quadform_points
quadform_grid = _impl.quadform_grid
bilinear_grid = _impl.bilinear_grid


def available_backends() -> dict:
    """Importable backend modules keyed by name."""
    backends = {"py": py_backend}
    try:
        from . import _ckernels

        backends["c"] = _ckernels
    except ImportError:
        pass
    return backends
