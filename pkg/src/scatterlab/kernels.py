"""Hot kernels, compiled when available.

The Cython build (``_kernels``) is used when importable; otherwise, or when
``SCATTERLAB_PURE=1`` is set, the numpy implementation in ``_kernels_py``
takes over.  Both return identical results.
"""
import os

from . import _kernels_py

BACKEND = "python"
batch_rank = _kernels_py.batch_rank

if os.environ.get("SCATTERLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        batch_rank = _kernels.batch_rank
        BACKEND = "cython"

__all__ = ["BACKEND", "batch_rank"]
