"""Backend selection for the hot loops.

The compiled extension ``_kernels`` is used when it has been built; otherwise
the numpy fallback ``_kernels_py`` is imported.  Setting the environment
variable ``LAMBDADICKE_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("LAMBDADICKE_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

reduced_surface = _impl.reduced_surface
reduced_surface_argmin = _impl.reduced_surface_argmin
ed_coupling_triplets = _impl.ed_coupling_triplets
DISK_TOL = _kernels_py.DISK_TOL

__all__ = [
    "BACKEND",
    "DISK_TOL",
    "reduced_surface",
    "reduced_surface_argmin",
    "ed_coupling_triplets",
]
