# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance kernels. Must agree bit-for-bit with _pykernels."""

from libc.math cimport sin, cos, sqrt, asin, fmin

cdef double EARTH_RADIUS_M = 6371000.0
cdef double DEG2RAD = 0.017453292519943295  # pi / 180, matches math.radians


cdef inline double _haversine(double lat1, double lon1, double lat2, double lon2) nogil:
    cdef double rlat1 = lat1 * DEG2RAD
    cdef double rlat2 = lat2 * DEG2RAD
    cdef double dlat = (lat2 - lat1) * DEG2RAD
    cdef double dlon = (lon2 - lon1) * DEG2RAD
    cdef double sdlat = sin(dlat / 2.0)
    cdef double sdlon = sin(dlon / 2.0)
    cdef double h = sdlat * sdlat + cos(rlat1) * cos(rlat2) * sdlon * sdlon
    return 2.0 * EARTH_RADIUS_M * asin(fmin(1.0, sqrt(h)))


def haversine_m(double lat1, double lon1, double lat2, double lon2):
    """Great-circle distance in meters on a sphere of mean Earth radius."""
    return _haversine(lat1, lon1, lat2, lon2)


def haversine_many(double lat, double lon, lats, lons):
    """Distances in meters from one point to each (lats[i], lons[i])."""
    cdef Py_ssize_t n = len(lats)
    if n != len(lons):
        raise ValueError("lats and lons must have equal length")
    cdef list out = [0.0] * n
    cdef Py_ssize_t i
    cdef double la, lo
    for i in range(n):
        la = lats[i]
        lo = lons[i]
        out[i] = _haversine(lat, lon, la, lo)
    return out
