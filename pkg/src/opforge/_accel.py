"""Selects the compiled elimination kernels when available.

Set ``OPFORGE_PURE=1`` to force the pure-Python implementations.
"""
import os

from . import _fallback

if os.environ.get("OPFORGE_PURE") == "1":
    _kernels = None
else:
    try:
        from . import _kernels
    except ImportError:  # extension not built
        _kernels = None

COMPILED = _kernels is not None

if COMPILED:
    rank_int64 = _kernels.rank_int
    rank_modp = _kernels.rank_modp
else:
    rank_int64 = None
    rank_modp = _fallback.rank_modp

rank_bigint = _fallback.rank_int
