"""Backend selection for the resolution kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module.  Set ``PROPINTERP_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pykernels

try:
    if os.environ.get("PROPINTERP_PURE_PYTHON"):
        raise ImportError("pure Python kernels requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
_impl = _ckernels if _ckernels is not None else _pykernels

saturate = _impl.saturate
resolve_pivot = _impl.resolve_pivot


def available_backends():
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out
