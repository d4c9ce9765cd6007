"""ASCII wire protocol between the studio/relay side and the controller.

Frames are single lines: a command letter, space-separated integer fields,
then ``*`` and a two-digit lowercase-hex XOR checksum over every byte
strictly between the letter and the ``*`` (spaces included):

    M <seq> <joint> <decideg> <motion_ms> *<ck>\\n    move one joint
    S <seq> *<ck>\\n                                  stop, freeze all joints
    P <seq> *<ck>\\n                                  ping

Replies are unchecksummed: ``A <seq>\\n`` acknowledges, ``N <seq>\\n``
rejects. Sequence numbers run 0..255 and wrap. Angles travel as decidegrees
(tenths of a degree), matching the one-decimal angle convention everywhere
else.

Delivery is stop-and-wait: send, await ack, retry on timeout or any reply
other than the matching ack, up to 1 + max_retries attempts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol, Union

from mojikit.kernels import xor_checksum
from mojikit.kinematics import (
    JOINT_COUNT,
    axis_range,
    f_axis,
    joint_from_index,
    joint_index,
    r_axis,
)
from mojikit.sequence import Sequence
from mojikit.trajectory import effective_motion_ms


class ProtocolError(ValueError):
    """Base for frame decode failures."""


class ParseError(ProtocolError):
    """The bytes do not match the frame grammar."""


class ChecksumMismatch(ProtocolError):
    """Well-shaped frame whose checksum does not cover its payload."""


class RangeError(ProtocolError):
    """Grammatical frame with a field outside its legal range."""


SEQ_MODULUS = 256
MAX_MOTION_MS = 600_000


@dataclass(frozen=True)
class Move:
    joint: int
    decideg: int
    motion_ms: int


@dataclass(frozen=True)
class Stop:
    pass


@dataclass(frozen=True)
class Ping:
    pass


Command = Union[Move, Stop, Ping]


@dataclass(frozen=True)
class Frame:
    seq: int
    command: Command


@dataclass(frozen=True)
class LinkConfig:
    baud: int = 115200
    ack_timeout_ms: int = 200
    max_retries: int = 2


@dataclass(frozen=True)
class DeliveryResult:
    delivered: bool
    attempts: int


def decideg(angle_deg: float) -> int:
    """Degrees to wire decidegrees (nearest tenth)."""
    return round(angle_deg * 10)


def _checksum_str(payload: bytes) -> str:
    return format(xor_checksum(payload), "02x")


def encode_frame(frame: Frame) -> bytes:
    """Frame to wire bytes, trailing newline included."""
    if not 0 <= frame.seq < SEQ_MODULUS:
        raise ValueError(f"seq {frame.seq} outside 0..{SEQ_MODULUS - 1}")
    cmd = frame.command
    if isinstance(cmd, Move):
        _check_move_ranges(frame.seq, cmd.joint, cmd.decideg, cmd.motion_ms)
        if cmd.motion_ms < 0:
            raise ValueError(f"motion_ms {cmd.motion_ms} is negative")
        payload = f" {frame.seq} {cmd.joint} {cmd.decideg} {cmd.motion_ms} "
        letter = "M"
    elif isinstance(cmd, Stop):
        payload = f" {frame.seq} "
        letter = "S"
    elif isinstance(cmd, Ping):
        payload = f" {frame.seq} "
        letter = "P"
    else:
        raise TypeError(f"not a command: {cmd!r}")
    raw = payload.encode("ascii")
    return f"{letter}{payload}*{_checksum_str(raw)}\n".encode("ascii")


_MOVE_RE = re.compile(rb"\A (\d+) (\d+) (-?\d+) (\d+) \Z")
_BARE_RE = re.compile(rb"\A (\d+) \Z")
_CK_RE = re.compile(rb"\A[0-9a-f]{2}\Z")


def _check_move_ranges(seq: int, joint: int, deci: int, motion_ms: int) -> Frame:
    if not 0 <= seq < SEQ_MODULUS:
        raise RangeError(f"seq {seq} outside 0..{SEQ_MODULUS - 1}")
    if not 0 <= joint < JOINT_COUNT:
        raise RangeError(f"joint index {joint} outside 0..{JOINT_COUNT - 1}")
    structure, axis = joint_from_index(joint)
    lo, hi = axis_range(structure, axis)
    if not lo * 10 <= deci <= hi * 10:
        raise RangeError(
            f"target {deci} decideg outside {structure.value} {axis.value} range")
    if motion_ms > MAX_MOTION_MS:
        raise RangeError(f"motion_ms {motion_ms} above {MAX_MOTION_MS}")
    return Frame(seq, Move(joint, deci, motion_ms))


def decode_frame(data: bytes) -> Frame:
    """Wire bytes to Frame.

    Checks in order: overall shape (ParseError), checksum over the payload
    (ChecksumMismatch), then field grammar and ranges (ParseError /
    RangeError). Requires exactly one newline-terminated line.
    """
    if not isinstance(data, (bytes, bytearray)):
        raise TypeError("decode_frame wants bytes")
    data = bytes(data)
    if not data.endswith(b"\n"):
        raise ParseError("missing newline terminator")
    line = data[:-1]
    if b"\n" in line or b"\r" in line:
        raise ParseError("more than one line")
    if len(line) < 4:
        raise ParseError("too short for a frame")
    letter = line[0:1]
    if letter not in (b"M", b"S", b"P"):
        raise ParseError(f"unknown frame letter {letter!r}")
    body = line[1:]
    if b"*" not in body:
        raise ParseError("missing checksum marker")
    payload, ck = body.rsplit(b"*", 1)
    if not _CK_RE.match(ck):
        raise ParseError("checksum must be two lowercase hex digits")
    if int(ck, 16) != xor_checksum(payload):
        raise ChecksumMismatch(
            f"checksum {ck.decode()} != {_checksum_str(payload)}")

    if letter == b"M":
        m = _MOVE_RE.match(payload)
        if not m:
            raise ParseError("move payload must be ' seq joint decideg ms '")
        seq, joint, deci, motion_ms = (int(g) for g in m.groups())
        return _check_move_ranges(seq, joint, deci, motion_ms)

    m = _BARE_RE.match(payload)
    if not m:
        raise ParseError("payload must be ' seq '")
    seq = int(m.group(1))
    if seq >= SEQ_MODULUS:
        raise RangeError(f"seq {seq} outside 0..{SEQ_MODULUS - 1}")
    return Frame(seq, Stop() if letter == b"S" else Ping())


def encode_ack(seq: int) -> bytes:
    return f"A {seq}\n".encode("ascii")


def encode_nak(seq: int) -> bytes:
    return f"N {seq}\n".encode("ascii")


_REPLY_RE = re.compile(rb"\A([AN]) (\d{1,3})\n\Z")


def parse_reply(data: bytes) -> tuple[str, int] | None:
    """('ack'|'nak', seq) for a well-formed reply line, else None."""
    if not isinstance(data, (bytes, bytearray)):
        return None
    m = _REPLY_RE.match(bytes(data))
    if not m:
        return None
    seq = int(m.group(2))
    if seq >= SEQ_MODULUS:
        return None
    return ("ack" if m.group(1) == b"A" else "nak", seq)


class Link(Protocol):
    """One request/reply exchange with the controller.

    exchange() transmits a frame and returns the reply bytes, or None when
    no reply arrived within the ack timeout.
    """

    def exchange(self, data: bytes) -> bytes | None: ...


class SerialLink:
    """Placeholder for a real UART attachment.

    Byte transport over actual hardware is out of scope; this class exists
    so callers can be written against the Link shape. Construct it with an
    object exposing write(bytes) and readline() -> bytes to adapt a real
    port; without one, exchange() raises.
    """

    def __init__(self, port: str, stream: object | None = None) -> None:
        self.port = port
        self._stream = stream

    def exchange(self, data: bytes) -> bytes | None:
        if self._stream is None:
            raise RuntimeError(
                f"serial port {self.port!r} is not attached; "
                "hardware transport is not implemented")
        self._stream.write(data)  # type: ignore[attr-defined]
        reply = self._stream.readline()  # type: ignore[attr-defined]
        return reply or None


def send_reliable(link: Link, frame: Frame,
                  config: LinkConfig = LinkConfig()) -> DeliveryResult:
    """Stop-and-wait delivery: up to 1 + max_retries attempts, success only
    on an ack matching the frame's sequence number."""
    attempts = 0
    encoded = encode_frame(frame)
    while attempts < 1 + config.max_retries:
        attempts += 1
        reply = link.exchange(encoded)
        if reply is not None:
            parsed = parse_reply(reply)
            if parsed is not None and parsed == ("ack", frame.seq):
                return DeliveryResult(delivered=True, attempts=attempts)
    return DeliveryResult(delivered=False, attempts=attempts)


@dataclass(frozen=True)
class TimedCommand:
    """A Move tagged with its absolute dispatch time within a sequence."""

    at_ms: int
    command: Move


def compile_sequence_to_commands(seq: Sequence) -> list[TimedCommand]:
    """Lower a sequence to per-joint moves.

    Each block yields two moves (F axis then R axis) tagged start_ms +
    delay_ms with the block's compressed motion duration. Ordered by tag,
    then structure enumeration order, then F before R, so compilation is
    deterministic.
    """
    out: list[tuple[int, int, TimedCommand]] = []
    for track in seq.tracks:
        structure = track.structure
        fj = joint_index(structure, f_axis(structure))
        rj = joint_index(structure, r_axis(structure))
        for block in track.blocks:
            tag = block.start_ms + block.delay_ms
            motion_ms = effective_motion_ms(block)
            out.append((tag, fj, TimedCommand(tag, Move(fj, decideg(block.f_deg), motion_ms))))
            out.append((tag, rj, TimedCommand(tag, Move(rj, decideg(block.r_deg), motion_ms))))
    out.sort(key=lambda item: (item[0], item[1]))
    return [tc for _, _, tc in out]
