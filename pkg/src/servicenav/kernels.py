"""Kernel backend selection.

Imports the compiled distance kernels when the extension was built,
otherwise falls back to the pure-Python implementation. BACKEND records
which one won so callers (and the benchmark) can report it.

Set SERVICENAV_PURE_KERNELS=1 to force the Python fallback.
"""

from __future__ import annotations

import os

from servicenav import _pykernels

EARTH_RADIUS_M = _pykernels.EARTH_RADIUS_M

if os.environ.get("SERVICENAV_PURE_KERNELS") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from servicenav import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

haversine_m = _impl.haversine_m
haversine_many = _impl.haversine_many
