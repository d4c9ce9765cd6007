"""Virtual controller: a protocol-faithful stand-in for the robot MCU.

The controller consumes wire frames, replies ack/nak, and integrates joint
motions on the same eased profile the planner uses, so a sequence played
over the wire matches direct engine playback to within decidegree
quantization. Duplicate sequence numbers (retransmissions) are acknowledged
but not re-applied. STOP freezes every joint where it currently is.

SimLink adapts the controller to the Link shape with optional fault
injection (forward-path drops and single-byte corruption, seeded) and byte
pacing at baud/10 bytes per simulated second (8N1 framing estimate).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from mojikit.executor import Engine, VirtualClock
from mojikit.kernels import sample_angle
from mojikit.kinematics import JOINT_COUNT, JointState, joint_from_index
from mojikit.protocol import (
    Frame,
    LinkConfig,
    Move,
    Ping,
    ProtocolError,
    Stop,
    compile_sequence_to_commands,
    decode_frame,
    encode_ack,
    encode_frame,
    encode_nak,
)
from mojikit.sequence import Sequence


@dataclass
class _JointMotion:
    start: float
    target: float
    t0_ms: int
    motion_ms: int


class VirtualController:
    """Simulated MCU: 16 joints, frame decoding, eased motion integration.

    Time is external: feed_frame and advance_to both carry the caller's
    clock, which must not move backwards. Poses are evaluated analytically
    at query time, so advance granularity never changes results.
    """

    def __init__(self) -> None:
        self.now_ms = 0
        self.angles = [0.0] * JOINT_COUNT
        self.last_seen_seq: int | None = None
        self._motions: dict[int, _JointMotion] = {}
        self.rx_log: list[bytes] = []
        self.tx_log: list[bytes] = []

    def _advance(self, now_ms: int) -> None:
        if now_ms < self.now_ms:
            raise ValueError(f"clock moved backwards: {self.now_ms} -> {now_ms}")
        self.now_ms = now_ms
        done = [j for j, m in self._motions.items()
                if now_ms - m.t0_ms >= m.motion_ms]
        for j in done:
            self.angles[j] = self._motions[j].target
            del self._motions[j]

    def _angle_at(self, joint: int, now_ms: int) -> float:
        m = self._motions.get(joint)
        if m is None:
            return self.angles[joint]
        return sample_angle(m.start, m.target, float(now_ms - m.t0_ms),
                            float(m.motion_ms))

    def feed_frame(self, data: bytes, now_ms: int) -> bytes:
        """Process one frame at the given time; returns the reply bytes."""
        self._advance(now_ms)
        self.rx_log.append(data)
        try:
            frame = decode_frame(data)
        except ProtocolError:
            reply = encode_nak(self._claimed_seq(data))
            self.tx_log.append(reply)
            return reply
        if frame.seq == self.last_seen_seq:
            # retransmission of the frame we just handled: ack, don't re-apply
            reply = encode_ack(frame.seq)
            self.tx_log.append(reply)
            return reply
        self.last_seen_seq = frame.seq
        cmd = frame.command
        if isinstance(cmd, Move):
            self._start_motion(cmd)
        elif isinstance(cmd, Stop):
            self._freeze()
        # Ping: reply only
        reply = encode_ack(frame.seq)
        self.tx_log.append(reply)
        return reply

    def _start_motion(self, cmd: Move) -> None:
        current = self._angle_at(cmd.joint, self.now_ms)
        self._motions[cmd.joint] = _JointMotion(
            start=current,
            target=cmd.decideg / 10.0,
            t0_ms=self.now_ms,
            motion_ms=cmd.motion_ms,
        )
        if cmd.motion_ms <= 0:
            self.angles[cmd.joint] = cmd.decideg / 10.0
            del self._motions[cmd.joint]

    def _freeze(self) -> None:
        for j in list(self._motions):
            self.angles[j] = self._angle_at(j, self.now_ms)
        self._motions.clear()

    @staticmethod
    def _claimed_seq(data: bytes) -> int:
        """Best-effort seq extraction for naks on undecodable frames."""
        try:
            token = data[1:].split()[0]
            seq = int(token)
            if 0 <= seq < 256:
                return seq
        except (ValueError, IndexError):
            pass
        return 0

    def advance_to(self, now_ms: int) -> list[float]:
        """Move time forward and return the 16-joint pose vector."""
        self._advance(now_ms)
        return [self._angle_at(j, now_ms) for j in range(JOINT_COUNT)]

    def pose_vector_at(self, t_ms: int) -> list[float]:
        """Pose without advancing the clock. For t before a joint's current
        motion started this reads that motion's start pose, so historical
        samples can smear across an overwritten motion; fine for post-hoc
        telemetry reconstruction, not for the fidelity harness."""
        return [self._angle_at(j, t_ms) for j in range(JOINT_COUNT)]

    def joint_state(self) -> JointState:
        return JointState.from_vector(self.advance_to(self.now_ms))


def format_telemetry_line(t_ms: int, angles: list[float]) -> str:
    """One telemetry log line: time then 16 one-decimal angles.

    Values that round to zero print as 0.0, never -0.0.
    """
    return f"{t_ms} " + " ".join(f"{round(a, 1) + 0.0:.1f}" for a in angles)


@dataclass(frozen=True)
class FaultProfile:
    """Seeded forward-path fault injection for the simulated link.

    drop_rate: probability a transmission never reaches the controller.
    corrupt_rate: probability one byte is rewritten in flight.
    Replies travel losslessly; with drops only, delivery over n attempts
    succeeds with probability 1 - drop_rate**n exactly.
    """

    drop_rate: float = 0.0
    corrupt_rate: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for name in ("drop_rate", "corrupt_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be within [0, 1], got {v}")


class SimLink:
    """Link over a VirtualController with pacing and fault injection.

    Owns a clock shared with the caller; a dropped transmission consumes the
    ack timeout, a delivered one consumes the frame's transmission time at
    baud/10 bytes per second (rounded up to whole milliseconds).
    """

    def __init__(self, controller: VirtualController,
                 clock: VirtualClock | None = None,
                 faults: FaultProfile | None = None,
                 config: LinkConfig = LinkConfig()) -> None:
        self.controller = controller
        self.clock = clock or VirtualClock()
        self.faults = faults
        self.config = config
        self._rng = random.Random(faults.rng_seed) if faults else None
        self.sent = 0
        self.dropped = 0
        self.corrupted = 0

    def _tx_time_ms(self, data: bytes) -> int:
        bytes_per_sec = self.config.baud // 10
        return max(1, -(-len(data) * 1000 // bytes_per_sec))

    def exchange(self, data: bytes) -> bytes | None:
        self.sent += 1
        if self._rng is not None and self.faults is not None:
            if self._rng.random() < self.faults.drop_rate:
                self.dropped += 1
                self.clock.advance(self.config.ack_timeout_ms)
                return None
            if self._rng.random() < self.faults.corrupt_rate:
                self.corrupted += 1
                data = self._corrupt(data)
        self.clock.advance(self._tx_time_ms(data))
        return self.controller.feed_frame(data, self.clock.now_ms)

    def _corrupt(self, data: bytes) -> bytes:
        assert self._rng is not None
        pos = self._rng.randrange(len(data))
        old = data[pos]
        new = self._rng.randrange(256)
        while new == old:
            new = self._rng.randrange(256)
        return data[:pos] + bytes([new]) + data[pos + 1:]


def run_wire_playback(seq: Sequence, tick_ms: int = 20,
                      n_ticks: int | None = None,
                      controller: VirtualController | None = None) -> list[tuple[int, list[float]]]:
    """Play a sequence over the wire against a virtual controller.

    Frames arrive exactly at their command tags (the sender leads each
    transmission by its line time, buffering ahead of playback start), with
    lossless delivery. Returns (t_ms, pose vector) sampled at t = 0 and at
    every tick; n_ticks defaults to covering the sequence end plus one
    trailing tick.
    """
    ctrl = controller if controller is not None else VirtualController()
    commands = compile_sequence_to_commands(seq)
    frames = [Frame(i % 256, tc.command) for i, tc in enumerate(commands)]
    tags = [tc.at_ms for tc in commands]

    if n_ticks is None:
        n_ticks = -(-seq.total_duration_ms // tick_ms) + 1
    out: list[tuple[int, list[float]]] = []
    i = 0
    for k in range(n_ticks + 1):
        t = k * tick_ms
        while i < len(frames) and tags[i] <= t:
            ctrl.feed_frame(encode_frame(frames[i]), tags[i])
            i += 1
        out.append((t, ctrl.advance_to(t)))
    return out


def mirror_equivalence_check(seq: Sequence, tick_ms: int = 20) -> float:
    """Max absolute divergence (degrees) between direct engine playback and
    the wire path through the virtual controller, sampled every tick."""
    engine = Engine()
    engine.enqueue(seq)
    wire = run_wire_playback(seq, tick_ms=tick_ms)

    worst = 0.0
    for t, wire_pose in wire:
        if t == 0:
            engine_pose = engine.pose.vector()
        else:
            engine_pose = engine.tick(tick_ms).vector()
        for a, b in zip(engine_pose, wire_pose):
            d = abs(a - b)
            if d > worst:
                worst = d
    return worst
