"""Deterministic playback engine.

Single owner, integer-millisecond clock, advanced only by tick(). Each
structure runs an independent FIFO queue; a block's window anchors at
max(its scheduled start, the previous block's window end on that structure),
its motion starts delay_ms into the window, and the pose is evaluated
analytically from the anchor, so coarse and fine tick schedules produce
identical poses at identical times.

stop() freezes the pose at its last evaluated values and clears all queues;
a later enqueue resumes playback from that pose.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from mojikit.kernels import sample_angle
from mojikit.kinematics import STRUCTURES, JointState, StructureId, f_axis, r_axis
from mojikit.sequence import InvalidSequenceError, MotionBlock, Sequence, validate_sequence
from mojikit.trajectory import effective_motion_ms

IDLE = "idle"
PLAYING = "playing"
STOPPED = "stopped"


class VirtualClock:
    """Manual clock for tests and harnesses; milliseconds, starts at zero."""

    def __init__(self) -> None:
        self.now_ms = 0

    def advance(self, dt_ms: int) -> int:
        if dt_ms < 0:
            raise ValueError(f"cannot advance by {dt_ms} ms")
        self.now_ms += dt_ms
        return self.now_ms


@dataclass
class _Scheduled:
    block: MotionBlock
    start_at: int  # absolute ms: enqueue time + block.start_ms


@dataclass
class _Active:
    block: MotionBlock
    window_start: int
    window_end: int
    motion_start: int
    motion_ms: int
    f0: float
    r0: float


@dataclass
class _StructureQueue:
    pending: deque[_Scheduled] = field(default_factory=deque)
    active: _Active | None = None
    last_window_end: int = 0


@dataclass(frozen=True)
class CompletedBlock:
    """Completion record: when the window closed vs when the engine saw it."""

    structure: StructureId
    block: MotionBlock
    window_start: int
    window_end: int
    observed_at: int


class Engine:
    """Owns the robot pose and plays validated sequences against it."""

    def __init__(self) -> None:
        self.clock_ms = 0
        self.status = IDLE
        self.pose = JointState.neutral()
        self.completed: list[CompletedBlock] = []
        self._queues: dict[StructureId, _StructureQueue] = {
            s: _StructureQueue() for s in STRUCTURES
        }

    def enqueue(self, seq: Sequence) -> int:
        """Schedule every block of a valid sequence relative to the current
        clock. Invalid sequences are rejected whole. Returns the number of
        blocks accepted."""
        report = validate_sequence(seq)
        if not report.ok:
            raise InvalidSequenceError(report)
        count = 0
        for track in seq.tracks:
            q = self._queues[track.structure]
            for block in track.blocks:
                q.pending.append(_Scheduled(block, self.clock_ms + block.start_ms))
                count += 1
        if count:
            self.status = PLAYING
        return count

    def tick(self, dt_ms: int) -> JointState:
        """Advance the clock and return the pose at the new time."""
        if dt_ms < 0:
            raise ValueError(f"cannot tick by {dt_ms} ms")
        self.clock_ms += dt_ms
        now = self.clock_ms
        for structure in STRUCTURES:
            q = self._queues[structure]
            while True:
                if q.active is not None and now >= q.active.window_end:
                    self._finish(structure, q)
                    continue
                if q.active is None and q.pending and q.pending[0].start_at <= now:
                    self._activate(structure, q)
                    continue
                break
            if q.active is not None:
                a = q.active
                elapsed = float(now - a.motion_start)
                self.pose.set(structure, f_axis(structure),
                              sample_angle(a.f0, a.block.f_deg, elapsed, float(a.motion_ms)))
                self.pose.set(structure, r_axis(structure),
                              sample_angle(a.r0, a.block.r_deg, elapsed, float(a.motion_ms)))
        if self.status == PLAYING and not self._any_work():
            self.status = IDLE
        return self.pose.copy()

    def stop(self) -> JointState:
        """Freeze the pose where the last tick left it and drop all queued
        and active blocks."""
        for q in self._queues.values():
            q.pending.clear()
            if q.active is not None:
                q.last_window_end = self.clock_ms
                q.active = None
        self.status = STOPPED
        return self.pose.copy()

    def snapshot(self) -> dict:
        """Engine state summary for inspection and telemetry envelopes."""
        return {
            "clock_ms": self.clock_ms,
            "status": self.status,
            "pose": self.pose.vector(),
            "queues": {
                s.value: {
                    "pending": len(q.pending),
                    "active": q.active is not None,
                }
                for s, q in self._queues.items()
            },
        }

    def _any_work(self) -> bool:
        return any(q.active is not None or q.pending for q in self._queues.values())

    def _activate(self, structure: StructureId, q: _StructureQueue) -> None:
        sched = q.pending.popleft()
        block = sched.block
        # FIFO: a block whose turn comes while the previous window is still
        # closing anchors at that window's end, never inside it
        anchor = max(sched.start_at, q.last_window_end)
        q.active = _Active(
            block=block,
            window_start=anchor,
            window_end=anchor + block.duration_ms,
            motion_start=anchor + block.delay_ms,
            motion_ms=effective_motion_ms(block),
            f0=self.pose.get(structure, f_axis(structure)),
            r0=self.pose.get(structure, r_axis(structure)),
        )

    def _finish(self, structure: StructureId, q: _StructureQueue) -> None:
        a = q.active
        assert a is not None
        self.pose.set(structure, f_axis(structure), a.block.f_deg)
        self.pose.set(structure, r_axis(structure), a.block.r_deg)
        q.last_window_end = a.window_end
        q.active = None
        self.completed.append(CompletedBlock(
            structure=structure,
            block=a.block,
            window_start=a.window_start,
            window_end=a.window_end,
            observed_at=self.clock_ms,
        ))
