# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled motion and codec kernels.

Must stay arithmetically identical to _kernels.py; the build disables
fp-contraction so results match CPython bit for bit.
"""

BACKEND = "compiled"


cdef inline double _ease(double u) nogil:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return u * u * (3.0 - 2.0 * u)


cdef inline double _sample(double start, double target, double elapsed_ms, double motion_ms) nogil:
    cdef double u
    if elapsed_ms < 0.0:
        return start
    if elapsed_ms >= motion_ms:
        return target
    u = elapsed_ms / motion_ms
    return start + (target - start) * (u * u * (3.0 - 2.0 * u))


def ease_weight(double u):
    """Smoothstep weight on [0, 1]: w = 3u^2 - 2u^3."""
    return _ease(u)


def sample_angle(double start, double target, double elapsed_ms, double motion_ms):
    """Angle along an eased motion, elapsed_ms after motion onset."""
    return _sample(start, target, elapsed_ms, motion_ms)


def sample_path(double start, double target, double motion_ms, times_ms):
    """sample_angle over a batch of elapsed times."""
    cdef list out = []
    cdef double t
    for t in times_ms:
        out.append(_sample(start, target, t, motion_ms))
    return out


def xor_checksum(bytes payload):
    """XOR of all payload bytes; 0 for an empty payload."""
    cdef unsigned char ck = 0
    cdef unsigned char b
    for b in payload:
        ck ^= b
    return ck
