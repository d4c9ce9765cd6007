"""Shared test helpers.

Two independent oracles live here on purpose:

* ``random_sequence`` builds arbitrary valid documents from a seeded RNG so
  any test can fuzz with reproducible inputs.
* ``reference_pose`` evaluates where every joint should be at a given time
  using nothing but the published timing rules, written as a direct
  transcription rather than by calling the engine.  Engine tests compare
  against it, so a shared bug would have to be made twice to go unnoticed.
"""

from __future__ import annotations

import random

from mojikit.kinematics import (
    STRUCTURE_AXES,
    STRUCTURES,
    AxisId,
    StructureId,
    axis_range,
    f_axis,
    joint_index,
    r_axis,
)
from mojikit.sequence import MotionBlock, Sequence, Track


def random_block(rng: random.Random, structure: StructureId, start_ms: int) -> MotionBlock:
    f_lo, f_hi = axis_range(structure, f_axis(structure))
    r_lo, r_hi = axis_range(structure, r_axis(structure))
    duration_ms = rng.randint(60, 2600)
    delay_ms = 0
    if duration_ms > 1 and rng.random() < 0.3:
        delay_ms = rng.randint(0, min(duration_ms - 1, 400))
    return MotionBlock(
        f_deg=round(rng.uniform(f_lo, f_hi), 1),
        r_deg=round(rng.uniform(r_lo, r_hi), 1),
        speed=rng.randint(1, 5),
        delay_ms=delay_ms,
        start_ms=start_ms,
        duration_ms=duration_ms,
    )


def random_sequence(rng: random.Random, name: str = "generated") -> Sequence:
    """A valid sequence over a random subset of structures."""
    chosen = rng.sample(STRUCTURES, rng.randint(1, len(STRUCTURES)))
    tracks = []
    for structure in chosen:
        cursor = rng.choice([0, 0, rng.randint(0, 500)])
        blocks = []
        for _ in range(rng.randint(1, 4)):
            block = random_block(rng, structure, cursor)
            blocks.append(block)
            gap = 0 if rng.random() < 0.6 else rng.randint(1, 350)
            cursor = block.end_ms + gap
        tracks.append(Track(structure=structure, blocks=blocks))
    return Sequence(name=name, tracks=tracks)


def _smooth(u: float) -> float:
    # written differently from the shipped kernel on purpose
    return 3.0 * u * u - 2.0 * u ** 3


def _ref_interp(a: float, b: float, elapsed_ms: float, motion_ms: int) -> float:
    if motion_ms <= 0 or elapsed_ms >= motion_ms:
        return b
    if elapsed_ms <= 0:
        return a
    return a + (b - a) * _smooth(elapsed_ms / motion_ms)


def reference_pose(seq: Sequence, t_ms: int) -> dict[tuple[StructureId, AxisId], float]:
    """Pose at absolute time t_ms for a sequence enqueued at time zero.

    Walks each track front to back carrying the latched pose forward.
    Blocks in a valid sequence never overlap, so the window of block k is
    exactly [start_ms, start_ms + duration_ms) and the pose entering it is
    the previous block's target (or neutral for the first).
    """
    pose: dict[tuple[StructureId, AxisId], float] = {}
    for structure in STRUCTURES:
        for axis in STRUCTURE_AXES[structure]:
            pose[(structure, axis)] = 0.0
    for track in seq.tracks:
        fa, ra = f_axis(track.structure), r_axis(track.structure)
        cur_f = cur_r = 0.0
        for block in track.blocks:
            if t_ms < block.start_ms:
                break
            nominal = 2400 // block.speed
            motion = min(nominal, block.duration_ms - block.delay_ms)
            if t_ms >= block.end_ms:
                cur_f, cur_r = block.f_deg, block.r_deg
                continue
            elapsed = t_ms - (block.start_ms + block.delay_ms)
            cur_f = _ref_interp(cur_f, block.f_deg, elapsed, motion)
            cur_r = _ref_interp(cur_r, block.r_deg, elapsed, motion)
            break
        pose[(track.structure, fa)] = cur_f
        pose[(track.structure, ra)] = cur_r
    return pose


def reference_vector(seq: Sequence, t_ms: int) -> list[float]:
    pose = reference_pose(seq, t_ms)
    out = [0.0] * 16
    for (structure, axis), value in pose.items():
        out[joint_index(structure, axis)] = value
    return out
