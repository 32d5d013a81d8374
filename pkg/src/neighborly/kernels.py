"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``NEIGHBORLY_PURE=1``
to force the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if not os.environ.get("NEIGHBORLY_PURE"):
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _pykernels


def backend(name: str | None = None):
    """Kernel namespace: 'compiled', 'python', or the active default."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def sat_all(nvars, pos, neg):
    if nvars > 64 and _impl is not _pykernels:
        return _pykernels.sat_all(nvars, pos, neg)
    return _impl.sat_all(nvars, pos, neg)


def localizations(sigma0, col_h, col_s, limit=0):
    return _impl.localizations(sigma0, col_h, col_s, limit)
