"""Compiled-kernel selection.

The hot walk loop has a Cython implementation (`minortest._speedups`) that
replays the exact same RNG stream, query accounting, and collision rules as
the pure-Python path, so results are identical bit-for-bit.  Set
MINORTEST_PURE=1 to force the pure path.
"""
from __future__ import annotations

import os

walk_batch = None
HAVE_SPEEDUPS = False

if not os.environ.get("MINORTEST_PURE"):
    try:
        from ._speedups import walk_batch as _wb

        walk_batch = _wb
        HAVE_SPEEDUPS = True
    except ImportError:
        pass
