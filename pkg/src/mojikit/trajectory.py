"""Motion timing and trajectory sampling.

Every motion follows the same eased profile: angle(t) = start + (target -
start) * w(u), where w(u) = 3u^2 - 2u^3 and u is elapsed motion time over the
motion duration. Speed 1..5 sets a nominal duration of 2400/speed ms; when
the block's window (duration minus delay) is shorter, the motion compresses
to fit.
"""

from __future__ import annotations

from dataclasses import dataclass

from mojikit.kernels import ease_weight, sample_angle, sample_path
from mojikit.sequence import SPEED_MAX, SPEED_MIN, MotionBlock

__all__ = [
    "ease_weight",
    "sample_angle",
    "motion_duration_ms",
    "effective_motion_ms",
    "TrajectorySample",
    "plan_block",
]

_SPEED_BASE_MS = 2400


def motion_duration_ms(speed: int) -> int:
    """Nominal eased-motion duration for a speed setting: 2400/speed ms."""
    if not SPEED_MIN <= speed <= SPEED_MAX:
        raise ValueError(f"speed {speed} outside {SPEED_MIN}..{SPEED_MAX}")
    return _SPEED_BASE_MS // speed


def effective_motion_ms(block: MotionBlock) -> int:
    """Motion duration after compressing into the block's window."""
    window = block.duration_ms - block.delay_ms
    return min(motion_duration_ms(block.speed), window)


@dataclass(frozen=True)
class TrajectorySample:
    t_ms: int
    f_deg: float
    r_deg: float


def plan_block(start_f: float, start_r: float, block: MotionBlock,
               tick_ms: int = 20) -> list[TrajectorySample]:
    """Sample one block's pose over its whole window.

    Times are absolute (block.start_ms onward), on a tick grid anchored at
    the window start, with the exact window end appended when the grid
    misses it. Samples before start + delay hold the start pose; samples
    after motion completion hold the targets.
    """
    if tick_ms <= 0:
        raise ValueError(f"tick_ms must be positive, got {tick_ms}")
    motion_ms = effective_motion_ms(block)
    if motion_ms <= 0:
        raise ValueError("block has no motion window (delay_ms >= duration_ms)")
    t_motion0 = block.start_ms + block.delay_ms

    # the grid never lands on end_ms (half-open range), so the exact window
    # end is always appended
    times = list(range(block.start_ms, block.end_ms, tick_ms))
    times.append(block.end_ms)

    rel = [float(t - t_motion0) for t in times]
    f_vals = sample_path(start_f, block.f_deg, float(motion_ms), rel)
    r_vals = sample_path(start_r, block.r_deg, float(motion_ms), rel)
    return [
        TrajectorySample(t, f, r)
        for t, f, r in zip(times, f_vals, r_vals)
    ]
