"""Selects the lattice evolution kernel backend at import time.

The compiled Cython extension is preferred; the pure-numpy module is a
drop-in replacement used when the extension is unavailable or when the
environment variable ``EQLAB_PURE_PYTHON`` is set (any non-empty value).
Both implement the same fixed-step scheme and agree to a few ulp; each
backend on its own is bit-reproducible run to run.
"""

from __future__ import annotations

import os

if os.environ.get("EQLAB_PURE_PYTHON"):
    from . import _evolve_py as _impl
else:
    try:
        from . import _evolve_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _evolve_py as _impl

BACKEND = _impl.BACKEND
rk4_channels = _impl.rk4_channels
