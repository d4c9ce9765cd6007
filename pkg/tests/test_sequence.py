"""Document model: canonical format, validation codes, import tolerance."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sequence
from mojikit.kinematics import StructureId
from mojikit.sequence import (
    DocumentParseError,
    InvalidBlockError,
    InvalidSequenceError,
    MotionBlock,
    OverlapError,
    Sequence,
    Track,
    export_sequence,
    import_sequence,
    insert_block,
    quantize_angle,
    remove_block,
    validate_block,
    validate_sequence,
)

HEAD = StructureId.HEAD
TAIL = StructureId.TAIL


def block(f=0.0, r=0.0, speed=3, delay=0, start=0, dur=1000) -> MotionBlock:
    return MotionBlock(f_deg=f, r_deg=r, speed=speed, delay_ms=delay,
                       start_ms=start, duration_ms=dur)


# ---------------------------------------------------------------- canonical

GOLDEN_DOC = (
    "{\n"
    '  "name": "golden",\n'
    '  "version": 1,\n'
    '  "tracks": [\n'
    "    {\n"
    '      "structure": "head",\n'
    '      "blocks": [\n'
    '        {"f_deg": 20.0, "r_deg": -10.0, "speed": 3, "delay_ms": 0, '
    '"start_ms": 0, "duration_ms": 1000}\n'
    "      ]\n"
    "    }\n"
    "  ]\n"
    "}\n"
)


def test_export_golden_bytes():
    seq = Sequence("golden", (Track(HEAD, (block(f=20.0, r=-10.0),)),))
    assert export_sequence(seq) == GOLDEN_DOC


def test_export_empty_sequence():
    text = export_sequence(Sequence("empty"))
    assert text == '{\n  "name": "empty",\n  "version": 1,\n  "tracks": []\n}\n'
    assert import_sequence(text) == Sequence("empty")


def test_golden_roundtrip():
    seq = import_sequence(GOLDEN_DOC)
    assert seq.name == "golden"
    assert seq.block_count == 1
    assert export_sequence(seq) == GOLDEN_DOC


def test_export_is_valid_json():
    seq = Sequence("golden", (Track(HEAD, (block(),)),))
    doc = json.loads(export_sequence(seq))
    assert list(doc) == ["name", "version", "tracks"]
    assert list(doc["tracks"][0]) == ["structure", "blocks"]
    assert list(doc["tracks"][0]["blocks"][0]) == [
        "f_deg", "r_deg", "speed", "delay_ms", "start_ms", "duration_ms"]


def test_angle_formatting_one_decimal():
    seq = Sequence("fmt", (Track(HEAD, (block(f=12.0, r=-0.04),)),))
    text = export_sequence(seq)
    assert '"f_deg": 12.0' in text
    assert '"r_deg": 0.0' in text  # -0.04 quantizes to 0.0, never -0.0
    assert "-0.0," not in text


def test_track_order_canonicalized():
    # tail listed before head in the input document; export reorders
    doc = json.loads(GOLDEN_DOC)
    doc["tracks"].append({
        "structure": "tail",
        "blocks": [{"f_deg": 5.0, "r_deg": 0.0, "speed": 2, "delay_ms": 0,
                    "start_ms": 0, "duration_ms": 600}],
    })
    doc["tracks"].reverse()
    seq = import_sequence(json.dumps(doc))
    assert [t.structure for t in seq.tracks] == [HEAD, TAIL]
    text = export_sequence(seq)
    assert text.index('"head"') < text.index('"tail"')


def test_import_tolerates_loose_formatting():
    # whitespace and key order are free on input; export is what normalizes
    loose = ('{"version":1,"tracks":[{"blocks":[{"duration_ms":1000,"start_ms":0,'
             '"delay_ms":0,"speed":3,"r_deg":-10,"f_deg":20}],"structure":"head"}],'
             '"name":"golden"}')
    assert export_sequence(import_sequence(loose)) == GOLDEN_DOC


def test_import_accepts_bytes():
    assert import_sequence(GOLDEN_DOC.encode()) == import_sequence(GOLDEN_DOC)
    with pytest.raises(DocumentParseError):
        import_sequence(b"\xff\xfe\x00")


# ---------------------------------------------------------------- model

def test_block_quantizes_on_construction():
    b = MotionBlock(f_deg=12.34, r_deg=-0.04, speed=3, delay_ms=0,
                    start_ms=0, duration_ms=100)
    assert b.f_deg == 12.3
    assert b.r_deg == 0.0
    assert str(b.r_deg) == "0.0"


def test_quantize_angle():
    assert quantize_angle(12.34) == 12.3
    assert quantize_angle(-0.04) == 0.0
    assert quantize_angle(-12.36) == -12.4
    assert quantize_angle(40) == 40.0


def test_block_rejects_bad_types():
    with pytest.raises(TypeError):
        MotionBlock(f_deg="ten", r_deg=0, speed=3, delay_ms=0, start_ms=0, duration_ms=1)
    with pytest.raises(TypeError):
        MotionBlock(f_deg=0, r_deg=0, speed=3.0, delay_ms=0, start_ms=0, duration_ms=1)
    with pytest.raises(TypeError):
        MotionBlock(f_deg=0, r_deg=0, speed=True, delay_ms=0, start_ms=0, duration_ms=1)


def test_track_sorts_blocks():
    b1 = block(start=500, dur=200)
    b2 = block(start=0, dur=400)
    t = Track(HEAD, (b1, b2))
    assert t.blocks == (b2, b1)
    assert t.end_ms == 700


def test_sequence_drops_empty_tracks_and_sorts():
    seq = Sequence("s", (Track(TAIL, (block(),)), Track(HEAD, ()), ))
    assert len(seq.tracks) == 1
    assert seq.tracks[0].structure is TAIL


def test_sequence_rejects_duplicate_structure():
    with pytest.raises(ValueError):
        Sequence("s", (Track(HEAD, (block(),)), Track(HEAD, (block(start=2000),))))


def test_sequence_totals():
    seq = Sequence("s", (
        Track(HEAD, (block(dur=1000), block(start=1000, dur=500))),
        Track(TAIL, (block(dur=2400),)),
    ))
    assert seq.total_duration_ms == 2400
    assert seq.block_count == 3
    assert seq.track_for(HEAD) is seq.tracks[0]
    assert seq.track_for(StructureId.EAR_LEFT) is None


# ---------------------------------------------------------------- validation

@pytest.mark.parametrize("kwargs,code", [
    (dict(speed=0), "speed_range"),
    (dict(speed=6), "speed_range"),
    (dict(start=-1), "start_negative"),
    (dict(dur=0), "duration_nonpositive"),
    (dict(dur=-100), "duration_nonpositive"),
    (dict(delay=-1), "delay_negative"),
    (dict(delay=1000, dur=1000), "delay_exceeds_duration"),
    (dict(f=41.0), "f_range"),
    (dict(f=-41.0), "f_range"),
    (dict(r=40.1), "r_range"),
])
def test_violation_codes(kwargs, code):
    b = block(**kwargs)
    codes = {v.code for v in validate_block(b, HEAD)}
    assert code in codes


def test_limb_flex_negative_is_r_range():
    b = block(r=-10.0)
    codes = {v.code for v in validate_block(b, StructureId.LIMB_FRONT_LEFT)}
    assert codes == {"r_range"}
    # the same block is fine on the head, whose R axis is symmetric
    assert validate_block(b, HEAD) == []


def test_multiple_violations_collected():
    b = block(f=99.0, speed=9, start=-5)
    codes = [v.code for v in validate_block(b, HEAD)]
    assert set(codes) == {"f_range", "speed_range", "start_negative"}


def test_overlap_detection():
    seq = Sequence("s", (Track(HEAD, (block(start=0, dur=1000),
                                      block(start=999, dur=500))),))
    report = validate_sequence(seq)
    assert not report.ok
    v = report.violations[0]
    assert v.code == "overlap"
    assert (v.block_index, v.other_index) == (0, 1)


def test_abutting_blocks_are_valid():
    seq = Sequence("s", (Track(HEAD, (block(start=0, dur=1000),
                                      block(start=1000, dur=500))),))
    assert validate_sequence(seq).ok


def test_report_as_dict():
    report = validate_sequence(Sequence("s", (Track(HEAD, (block(speed=0),)),)))
    d = report.as_dict()
    assert d["ok"] is False
    assert d["violations"][0]["code"] == "speed_range"
    assert d["violations"][0]["structure"] == "head"
    assert d["violations"][0]["block_index"] == 0


def test_export_refuses_invalid():
    seq = Sequence("bad", (Track(HEAD, (block(f=99.0),)),))
    with pytest.raises(InvalidSequenceError) as exc:
        export_sequence(seq)
    assert exc.value.report.violations[0].code == "f_range"


# ---------------------------------------------------------------- editing

def test_insert_block_sorted_and_pure():
    seq = Sequence("s", (Track(HEAD, (block(start=1000, dur=500),)),))
    before = seq.tracks[0].blocks
    out = insert_block(seq, HEAD, block(start=0, dur=1000))
    assert seq.tracks[0].blocks == before  # original untouched
    assert [b.start_ms for b in out.tracks[0].blocks] == [0, 1000]


def test_insert_block_new_track():
    seq = Sequence("s", (Track(HEAD, (block(),)),))
    out = insert_block(seq, TAIL, block(r=30.0, dur=400))
    assert [t.structure for t in out.tracks] == [HEAD, TAIL]


def test_insert_abutting_allowed():
    seq = Sequence("s", (Track(HEAD, (block(start=0, dur=1000),)),))
    out = insert_block(seq, HEAD, block(start=1000, dur=200))
    assert out.block_count == 2


def test_insert_overlap_rejected():
    seq = Sequence("s", (Track(HEAD, (block(start=0, dur=1000),)),))
    with pytest.raises(OverlapError) as exc:
        insert_block(seq, HEAD, block(start=999, dur=100))
    assert exc.value.conflict_index == 0
    assert exc.value.conflict.start_ms == 0


def test_insert_invalid_block_rejected():
    seq = Sequence("s")
    with pytest.raises(InvalidBlockError) as exc:
        insert_block(seq, HEAD, block(speed=0))
    assert exc.value.violations[0].code == "speed_range"


def test_remove_block():
    seq = Sequence("s", (Track(HEAD, (block(start=0, dur=500),
                                      block(start=500, dur=500))),))
    out = remove_block(seq, HEAD, 0)
    assert [b.start_ms for b in out.tracks[0].blocks] == [500]
    gone = remove_block(out, HEAD, 0)
    assert gone.tracks == ()  # removing the last block drops the track
    with pytest.raises(IndexError):
        remove_block(seq, HEAD, 2)
    with pytest.raises(KeyError):
        remove_block(seq, TAIL, 0)


# ---------------------------------------------------------------- import errors

@pytest.mark.parametrize("text", [
    "not json at all",
    "[1, 2, 3]",
    '{"name": "x", "tracks": []}',                       # missing version
    '{"name": "x", "version": 2, "tracks": []}',          # wrong version
    '{"name": "x", "version": true, "tracks": []}',
    '{"name": 5, "version": 1, "tracks": []}',
    '{"name": "x", "version": 1, "tracks": {}}',
    '{"name": "x", "version": 1, "tracks": [], "author": "y"}',
    '{"name": "x", "version": 1, "tracks": [{"structure": "wing", "blocks": []}]}',
    '{"name": "x", "version": 1, "tracks": [{"structure": "head"}]}',
    '{"name": "x", "version": 1, "tracks": [{"structure": "head", "blocks": [{}]}]}',
])
def test_import_rejects_malformed(text):
    with pytest.raises(DocumentParseError):
        import_sequence(text)


def test_import_rejects_unknown_block_key():
    doc = json.loads(GOLDEN_DOC)
    doc["tracks"][0]["blocks"][0]["color"] = "red"
    with pytest.raises(DocumentParseError, match="color"):
        import_sequence(json.dumps(doc))


def test_import_rejects_float_time():
    doc = json.loads(GOLDEN_DOC)
    doc["tracks"][0]["blocks"][0]["start_ms"] = 0.5
    with pytest.raises(DocumentParseError):
        import_sequence(json.dumps(doc))


def test_import_rejects_bool_speed():
    doc = json.loads(GOLDEN_DOC)
    doc["tracks"][0]["blocks"][0]["speed"] = True
    with pytest.raises(DocumentParseError):
        import_sequence(json.dumps(doc))


def test_import_rejects_duplicate_track():
    doc = json.loads(GOLDEN_DOC)
    doc["tracks"].append(doc["tracks"][0])
    with pytest.raises(DocumentParseError, match="duplicate"):
        import_sequence(json.dumps(doc))


def test_import_keeps_semantic_problems():
    # out-of-range angle parses fine and is reported by validation instead
    doc = json.loads(GOLDEN_DOC)
    doc["tracks"][0]["blocks"][0]["f_deg"] = 99.0
    seq = import_sequence(json.dumps(doc))
    report = validate_sequence(seq)
    assert not report.ok
    assert report.violations[0].code == "f_range"


# ---------------------------------------------------------------- round trips

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_roundtrip_random_sequences(seed):
    seq = random_sequence(random.Random(seed))
    text = export_sequence(seq)
    back = import_sequence(text)
    assert back == seq
    assert export_sequence(back) == text


def test_double_export_identity():
    rng = random.Random(99)
    for _ in range(20):
        seq = random_sequence(rng)
        once = export_sequence(seq)
        assert export_sequence(import_sequence(once)) == once
