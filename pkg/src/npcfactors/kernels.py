"""Kernel backend selection.

The compiled extension is used when importable; setting the environment
variable ``NPCFACTORS_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("NPCFACTORS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _fallback

philox4x64 = _impl.philox4x64
gaussian_grid = _impl.gaussian_grid
uniform_grid = _impl.uniform_grid
ar1_filter = _impl.ar1_filter
kms_matvec = _impl.kms_matvec

__all__ = [
    "BACKEND",
    "philox4x64",
    "gaussian_grid",
    "uniform_grid",
    "ar1_filter",
    "kms_matvec",
]
