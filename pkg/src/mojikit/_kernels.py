"""Pure-Python motion and codec kernels.

Reference implementation for the compiled twin in _speedups.pyx. Both must be
arithmetically identical, operation for operation: tests assert bit-equal
results across backends.
"""

from __future__ import annotations

BACKEND = "pure"


def ease_weight(u: float) -> float:
    """Smoothstep weight on [0, 1]: w = 3u^2 - 2u^3.

    Zero velocity at both ends, monotone in between. Inputs outside [0, 1]
    are clamped.
    """
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return u * u * (3.0 - 2.0 * u)


def sample_angle(start: float, target: float, elapsed_ms: float, motion_ms: float) -> float:
    """Angle along an eased motion, elapsed_ms after motion onset.

    Holds start strictly before onset and target after completion.
    motion_ms <= 0 degenerates to an instant step at onset.
    """
    if elapsed_ms < 0.0:
        return start
    if elapsed_ms >= motion_ms:
        return target
    u = elapsed_ms / motion_ms
    return start + (target - start) * (u * u * (3.0 - 2.0 * u))


def sample_path(start: float, target: float, motion_ms: float, times_ms: list[float]) -> list[float]:
    """sample_angle over a batch of elapsed times."""
    out = []
    for t in times_ms:
        out.append(sample_angle(start, target, t, motion_ms))
    return out


def xor_checksum(payload: bytes) -> int:
    """XOR of all payload bytes; 0 for an empty payload."""
    ck = 0
    for b in payload:
        ck ^= b
    return ck
