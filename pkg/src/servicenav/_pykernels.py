"""Pure-Python distance kernels.

Reference implementation of the hot numeric loops. servicenav.kernels
prefers the compiled twin (servicenav._ckernels) when it imported cleanly;
both must agree to full float precision on the same inputs, which the test
suite checks pairwise.
"""

from __future__ import annotations

import math

EARTH_RADIUS_M = 6_371_000.0


def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters on a sphere of mean Earth radius."""
    rlat1 = math.radians(lat1)
    rlat2 = math.radians(lat2)
    dlat = math.radians(lat2 - lat1)
    dlon = math.radians(lon2 - lon1)
    h = (
        math.sin(dlat / 2.0) ** 2
        + math.cos(rlat1) * math.cos(rlat2) * math.sin(dlon / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def haversine_many(lat: float, lon: float, lats, lons) -> list[float]:
    """Distances in meters from one point to each (lats[i], lons[i])."""
    if len(lats) != len(lons):
        raise ValueError("lats and lons must have equal length")
    return [haversine_m(lat, lon, lats[i], lons[i]) for i in range(len(lats))]
