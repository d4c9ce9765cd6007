"""Motion sequence documents: model, validation, canonical text format.

A sequence holds at most one track per structure; a track holds motion blocks
ordered by start time, occupying half-open windows [start_ms, start_ms +
duration_ms). Construction enforces structure (types, ordering, one track per
structure); semantic rules (ranges, speed, delay, overlap) are checked by
validate_sequence so that imported documents can be re-validated and reported
on rather than rejected at parse time.

The text format is a JSON document emitted canonically: fixed key order,
2-space indent, one-decimal angles, integer times, one block per line,
trailing newline. Exporting a valid sequence and importing it back yields an
equal sequence and re-exporting yields identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable

from mojikit.kinematics import (
    StructureId,
    STRUCTURES,
    f_axis,
    in_range,
    r_axis,
)

FORMAT_VERSION = 1
SPEED_MIN = 1
SPEED_MAX = 5

_STRUCTURE_ORDER = {s: i for i, s in enumerate(STRUCTURES)}
_STRUCTURE_BY_NAME = {s.value: s for s in STRUCTURES}

_BLOCK_KEYS = ("f_deg", "r_deg", "speed", "delay_ms", "start_ms", "duration_ms")


class DocumentParseError(ValueError):
    """The text is not a well-formed sequence document."""


class InvalidSequenceError(ValueError):
    """Operation requires a valid sequence; carries the validation report."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        first = report.violations[0].message if report.violations else "invalid"
        extra = len(report.violations) - 1
        suffix = f" (+{extra} more)" if extra > 0 else ""
        super().__init__(first + suffix)


class InvalidBlockError(ValueError):
    """A block fails its own field rules; carries the violations."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


class OverlapError(ValueError):
    """Insertion rejected: the new block overlaps an existing one."""

    def __init__(self, structure: StructureId, conflict_index: int, conflict: "MotionBlock"):
        self.structure = structure
        self.conflict_index = conflict_index
        self.conflict = conflict
        super().__init__(
            f"{structure.value}: overlaps block {conflict_index} "
            f"[{conflict.start_ms}, {conflict.end_ms})"
        )


def quantize_angle(value: float) -> float:
    """Snap to one decimal; -0.0 normalizes to 0.0."""
    return round(float(value), 1) + 0.0


def format_angle(value: float) -> str:
    return f"{value:.1f}"


def _require_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{what} must be an integer, got {value!r}")
    return value


def _require_number(value: Any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{what} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class MotionBlock:
    """One timed motion on a single structure.

    f_deg/r_deg are the F- and R-axis targets in degrees, quantized to one
    decimal at construction. The block occupies [start_ms, end_ms); motion
    begins delay_ms into the window and runs for the lesser of the speed's
    nominal duration and the remaining window.
    """

    f_deg: float
    r_deg: float
    speed: int
    delay_ms: int
    start_ms: int
    duration_ms: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "f_deg", quantize_angle(_require_number(self.f_deg, "f_deg")))
        object.__setattr__(self, "r_deg", quantize_angle(_require_number(self.r_deg, "r_deg")))
        _require_int(self.speed, "speed")
        _require_int(self.delay_ms, "delay_ms")
        _require_int(self.start_ms, "start_ms")
        _require_int(self.duration_ms, "duration_ms")

    @property
    def end_ms(self) -> int:
        return self.start_ms + self.duration_ms


@dataclass(frozen=True)
class Track:
    """All blocks for one structure, kept sorted by start time."""

    structure: StructureId
    blocks: tuple[MotionBlock, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.structure, StructureId):
            raise TypeError(f"structure must be a StructureId, got {self.structure!r}")
        ordered = tuple(
            sorted(
                self.blocks,
                key=lambda b: (b.start_ms, b.duration_ms, b.delay_ms, b.speed, b.f_deg, b.r_deg),
            )
        )
        object.__setattr__(self, "blocks", ordered)

    @property
    def end_ms(self) -> int:
        return max((b.end_ms for b in self.blocks), default=0)


@dataclass(frozen=True)
class Sequence:
    """A named set of tracks, at most one per structure.

    Empty tracks are dropped and tracks are kept in structure enumeration
    order, so structurally equal sequences compare equal and export
    identically.
    """

    name: str
    tracks: tuple[Track, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.name, str):
            raise TypeError(f"name must be a string, got {self.name!r}")
        kept = [t for t in self.tracks if t.blocks]
        seen: set[StructureId] = set()
        for t in kept:
            if t.structure in seen:
                raise ValueError(f"duplicate track for structure {t.structure.value}")
            seen.add(t.structure)
        kept.sort(key=lambda t: _STRUCTURE_ORDER[t.structure])
        object.__setattr__(self, "tracks", tuple(kept))

    def track_for(self, structure: StructureId) -> Track | None:
        for t in self.tracks:
            if t.structure is structure:
                return t
        return None

    @property
    def total_duration_ms(self) -> int:
        return max((t.end_ms for t in self.tracks), default=0)

    @property
    def block_count(self) -> int:
        return sum(len(t.blocks) for t in self.tracks)


@dataclass(frozen=True)
class Violation:
    """One validation finding, addressed by structure and block index."""

    code: str
    message: str
    structure: str | None = None
    block_index: int | None = None
    other_index: int | None = None

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.structure is not None:
            out["structure"] = self.structure
        if self.block_index is not None:
            out["block_index"] = self.block_index
        if self.other_index is not None:
            out["other_index"] = self.other_index
        return out


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def as_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}


def validate_block(block: MotionBlock, structure: StructureId,
                   index: int | None = None) -> list[Violation]:
    """Field-level rules for one block in the context of its structure."""
    sname = structure.value
    found: list[Violation] = []

    def add(code: str, message: str) -> None:
        found.append(Violation(code, f"{sname}[{index}]: {message}" if index is not None
                               else f"{sname}: {message}", sname, index))

    if not SPEED_MIN <= block.speed <= SPEED_MAX:
        add("speed_range", f"speed {block.speed} outside {SPEED_MIN}..{SPEED_MAX}")
    if block.start_ms < 0:
        add("start_negative", f"start_ms {block.start_ms} is negative")
    if block.duration_ms <= 0:
        add("duration_nonpositive", f"duration_ms {block.duration_ms} must be positive")
    if block.delay_ms < 0:
        add("delay_negative", f"delay_ms {block.delay_ms} is negative")
    elif block.delay_ms >= block.duration_ms:
        add("delay_exceeds_duration",
            f"delay_ms {block.delay_ms} leaves no motion window in duration_ms {block.duration_ms}")
    if not in_range(structure, f_axis(structure), block.f_deg):
        add("f_range", f"f_deg {block.f_deg} outside {f_axis(structure).value} range")
    if not in_range(structure, r_axis(structure), block.r_deg):
        add("r_range", f"r_deg {block.r_deg} outside {r_axis(structure).value} range")
    return found


def validate_sequence(seq: Sequence) -> ValidationReport:
    """Semantic check: field rules per block plus per-track non-overlap."""
    found: list[Violation] = []
    for track in seq.tracks:
        for i, block in enumerate(track.blocks):
            found.extend(validate_block(block, track.structure, i))
        for i in range(1, len(track.blocks)):
            prev, cur = track.blocks[i - 1], track.blocks[i]
            if prev.end_ms > cur.start_ms:
                found.append(Violation(
                    "overlap",
                    f"{track.structure.value}[{i - 1}] and [{i}] overlap: "
                    f"[{prev.start_ms}, {prev.end_ms}) vs [{cur.start_ms}, {cur.end_ms})",
                    track.structure.value, i - 1, i))
    return ValidationReport(ok=not found, violations=tuple(found))


def insert_block(seq: Sequence, structure: StructureId, block: MotionBlock) -> Sequence:
    """New sequence with the block added to the structure's track.

    The block must pass its own field rules (InvalidBlockError) and must not
    overlap an existing block on that track (OverlapError; abutting windows
    are fine). The input sequence is not modified.
    """
    bad = validate_block(block, structure)
    if bad:
        raise InvalidBlockError(bad)
    track = seq.track_for(structure)
    existing = track.blocks if track else ()
    for i, other in enumerate(existing):
        if block.start_ms < other.end_ms and other.start_ms < block.end_ms:
            raise OverlapError(structure, i, other)
    new_track = Track(structure, existing + (block,))
    others = tuple(t for t in seq.tracks if t.structure is not structure)
    return Sequence(seq.name, others + (new_track,))


def remove_block(seq: Sequence, structure: StructureId, index: int) -> Sequence:
    """New sequence with the indexed block removed from the structure's track."""
    track = seq.track_for(structure)
    if track is None:
        raise KeyError(f"no track for structure {structure.value}")
    if not 0 <= index < len(track.blocks):
        raise IndexError(f"{structure.value}: no block at index {index}")
    remaining = track.blocks[:index] + track.blocks[index + 1:]
    others = tuple(t for t in seq.tracks if t.structure is not structure)
    if remaining:
        return Sequence(seq.name, others + (Track(structure, remaining),))
    return Sequence(seq.name, others)


def export_sequence(seq: Sequence) -> str:
    """Canonical document text. Requires a valid sequence."""
    report = validate_sequence(seq)
    if not report.ok:
        raise InvalidSequenceError(report)
    lines = ["{", f'  "name": {json.dumps(seq.name)},', f'  "version": {FORMAT_VERSION},']
    if not seq.tracks:
        lines.append('  "tracks": []')
    else:
        lines.append('  "tracks": [')
        for ti, track in enumerate(seq.tracks):
            lines.append("    {")
            lines.append(f'      "structure": "{track.structure.value}",')
            lines.append('      "blocks": [')
            last = len(track.blocks) - 1
            for bi, b in enumerate(track.blocks):
                lines.append(
                    f'        {{"f_deg": {format_angle(b.f_deg)}, '
                    f'"r_deg": {format_angle(b.r_deg)}, '
                    f'"speed": {b.speed}, "delay_ms": {b.delay_ms}, '
                    f'"start_ms": {b.start_ms}, "duration_ms": {b.duration_ms}}}'
                    + ("," if bi < last else "")
                )
            lines.append("      ]")
            lines.append("    }" + ("," if ti < len(seq.tracks) - 1 else ""))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _parse_block(raw: Any, where: str) -> MotionBlock:
    if not isinstance(raw, dict):
        raise DocumentParseError(f"{where}: block must be an object")
    unknown = set(raw) - set(_BLOCK_KEYS)
    if unknown:
        raise DocumentParseError(f"{where}: unknown block key {sorted(unknown)[0]!r}")
    missing = [k for k in _BLOCK_KEYS if k not in raw]
    if missing:
        raise DocumentParseError(f"{where}: missing block key {missing[0]!r}")
    try:
        return MotionBlock(
            f_deg=_require_number(raw["f_deg"], "f_deg"),
            r_deg=_require_number(raw["r_deg"], "r_deg"),
            speed=_require_int(raw["speed"], "speed"),
            delay_ms=_require_int(raw["delay_ms"], "delay_ms"),
            start_ms=_require_int(raw["start_ms"], "start_ms"),
            duration_ms=_require_int(raw["duration_ms"], "duration_ms"),
        )
    except TypeError as e:
        raise DocumentParseError(f"{where}: {e}") from None


def import_sequence(text: str | bytes) -> Sequence:
    """Parse a document into a Sequence without judging semantic validity.

    Raises DocumentParseError for anything structurally wrong: bad JSON,
    wrong types, unknown keys or structures, duplicate tracks, unsupported
    version. Range/overlap/speed problems survive parsing; run
    validate_sequence on the result.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentParseError(f"not valid UTF-8: {e}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise DocumentParseError("top level must be an object")
    unknown = set(doc) - {"name", "version", "tracks"}
    if unknown:
        raise DocumentParseError(f"unknown top-level key {sorted(unknown)[0]!r}")
    for key in ("name", "version", "tracks"):
        if key not in doc:
            raise DocumentParseError(f"missing top-level key {key!r}")
    if not isinstance(doc["name"], str):
        raise DocumentParseError("name must be a string")
    version = doc["version"]
    if isinstance(version, bool) or not isinstance(version, int) or version != FORMAT_VERSION:
        raise DocumentParseError(f"unsupported version {version!r} (expected {FORMAT_VERSION})")
    if not isinstance(doc["tracks"], list):
        raise DocumentParseError("tracks must be an array")

    tracks: list[Track] = []
    seen: set[StructureId] = set()
    for ti, raw_track in enumerate(doc["tracks"]):
        where = f"tracks[{ti}]"
        if not isinstance(raw_track, dict):
            raise DocumentParseError(f"{where}: track must be an object")
        unknown = set(raw_track) - {"structure", "blocks"}
        if unknown:
            raise DocumentParseError(f"{where}: unknown track key {sorted(unknown)[0]!r}")
        if "structure" not in raw_track or "blocks" not in raw_track:
            raise DocumentParseError(f"{where}: track needs structure and blocks")
        sname = raw_track["structure"]
        if not isinstance(sname, str) or sname not in _STRUCTURE_BY_NAME:
            raise DocumentParseError(f"{where}: unknown structure {sname!r}")
        structure = _STRUCTURE_BY_NAME[sname]
        if structure in seen:
            raise DocumentParseError(f"{where}: duplicate track for structure {sname}")
        seen.add(structure)
        if not isinstance(raw_track["blocks"], list):
            raise DocumentParseError(f"{where}: blocks must be an array")
        blocks = tuple(
            _parse_block(raw, f"{where}.blocks[{bi}]")
            for bi, raw in enumerate(raw_track["blocks"])
        )
        tracks.append(Track(structure, blocks))
    return Sequence(doc["name"], tuple(tracks))


def sequence_from_dict(name: str, spec: dict[StructureId, Iterable[MotionBlock]]) -> Sequence:
    """Convenience builder used by tests and preset authoring."""
    return Sequence(name, tuple(Track(s, tuple(blocks)) for s, blocks in spec.items()))
