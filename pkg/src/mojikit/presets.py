"""Bundled preset sequences.

Fifteen small, named motions covering every structure, shipped as canonical
document files and parsed on load. `stretch` doubles as the homing motion:
it ends with every joint it touches back at neutral.
"""

from __future__ import annotations

from importlib import resources

from mojikit.sequence import Sequence, import_sequence

# Head-to-tail listing order; also the order of /presets and the CLI listing.
PRESET_NAMES: tuple[str, ...] = (
    "nod",
    "head_turn_left",
    "head_turn_right",
    "head_shake",
    "ear_perk",
    "ear_fold",
    "paw_lift",
    "paw_tap",
    "both_paws_up",
    "curl_up",
    "roll",
    "stretch",
    "tail_wag",
    "tail_curl",
    "greet_combo",
)


def preset_text(name: str) -> str:
    """Raw canonical document for one preset."""
    if name not in PRESET_NAMES:
        raise KeyError(f"no preset named {name!r}")
    path = resources.files("mojikit.data") / "presets" / f"{name}.seq"
    return path.read_text(encoding="utf-8")


def load_preset(name: str) -> Sequence:
    return import_sequence(preset_text(name))


def load_presets() -> dict[str, Sequence]:
    """All presets, keyed by name in listing order."""
    return {name: load_preset(name) for name in PRESET_NAMES}
