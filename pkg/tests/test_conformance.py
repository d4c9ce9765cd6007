"""Shared document corpus: library, CLI, and service must agree."""

import json
from importlib import resources

import pytest
from fastapi.testclient import TestClient

from mojikit.cli import EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, main
from mojikit.sequence import (
    DocumentParseError,
    export_sequence,
    import_sequence,
    validate_sequence,
)
from mojikit.service import create_app


def _corpus_root():
    return resources.files("mojikit.data") / "conformance"


def _manifest():
    with (_corpus_root() / "manifest.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)["entries"]


ENTRIES = _manifest()


def _entry_text(entry):
    return (_corpus_root() / entry["file"]).read_text("utf-8")


def test_manifest_covers_three_classes():
    kinds = {e["expected"] for e in ENTRIES}
    assert kinds == {"valid", "invalid", "malformed"}
    assert len(ENTRIES) >= 20


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e["file"])
def test_library_classification(entry):
    text = _entry_text(entry)
    if entry["expected"] == "malformed":
        with pytest.raises(DocumentParseError):
            import_sequence(text)
        return
    seq = import_sequence(text)
    report = validate_sequence(seq)
    assert report.ok == (entry["expected"] == "valid")


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e["file"])
def test_cli_classification(entry, tmp_path, capsys):
    path = tmp_path / "doc.seq"
    path.write_text(_entry_text(entry), encoding="utf-8")
    code = main(["validate", str(path)])
    capsys.readouterr()
    expected = {"valid": EXIT_OK, "invalid": EXIT_VALIDATION,
                "malformed": EXIT_PARSE}[entry["expected"]]
    assert code == expected


def test_service_agrees_with_cli():
    with TestClient(create_app(clock="virtual")) as client:
        for entry in ENTRIES:
            resp = client.post("/validate", content=_entry_text(entry))
            if entry["expected"] == "malformed":
                assert resp.status_code == 400, entry["file"]
            else:
                assert resp.status_code == 200, entry["file"]
                assert resp.json()["ok"] == (entry["expected"] == "valid"), entry["file"]


def test_valid_entries_reexport_canonically():
    for entry in ENTRIES:
        if entry["expected"] != "valid":
            continue
        text = _entry_text(entry)
        seq = import_sequence(text)
        assert export_sequence(seq) == text, entry["file"]
