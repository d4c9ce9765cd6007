"""Affective interaction knowledge base.

Two bundled datasets: eight reference cards (human-centric, environmental,
and animal-centric design prompts) and 35 interaction patterns coded on four
dimensions (intent, trigger, behavior, affect). Patterns may list several
behavior primitives; the first is the primary one and aggregate statistics
count only it, so every marginal sums to the pattern count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Any


class Intent(Enum):
    GREETING_REUNION = "greeting_reunion"
    AFFECTION_COMFORT = "affection_comfort"
    PLAY_TEASING = "play_teasing"
    ATTENTION_SEEKING = "attention_seeking"
    TRAINING_INSTRUCTION = "training_instruction"
    BOUNDARY_DISCIPLINE = "boundary_discipline"
    AVOID_REFUSE = "avoid_refuse"
    OTHER = "other"


class Trigger(Enum):
    HUMAN_ACTION = "human_action"
    ENVIRONMENTAL_CUE = "environmental_cue"
    TEMPORAL_ROUTINE = "temporal_routine"
    PROACTIVE_ROBOT = "proactive_robot"


class BehaviorPrimitive(Enum):
    HEAD_TURN_NOD = "head_turn_nod"
    APPROACH = "approach"
    TAIL_WAG = "tail_wag"
    PAW_TAP_CONTACT = "paw_tap_contact"
    VOCALIZATION = "vocalization"
    LIE_CURL_ROLL = "lie_curl_roll"
    RETREAT_AVOID = "retreat_avoid"
    OTHER_COMPLEX = "other_complex"


class Affect(Enum):
    POSITIVE_SEEKING = "positive_seeking"
    POSITIVE_COMFORTING = "positive_comforting"
    NEGATIVE_AVOIDING = "negative_avoiding"
    DISCIPLINARY_CORRECTIVE = "disciplinary_corrective"
    AMBIGUOUS_MIXED = "ambiguous_mixed"


CARD_MODULES = ("human_centric", "environmental", "animal_centric")

PATTERN_COUNT = 35
CARD_COUNT = 8


class DatasetError(ValueError):
    """Bundled data failed its integrity checks."""


@dataclass(frozen=True)
class CardSection:
    heading: str
    items: tuple[str, ...]


@dataclass(frozen=True)
class Card:
    id: str
    module: str
    species: str | None
    title: str
    sections: tuple[CardSection, ...]

    def as_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "module": self.module,
            "species": self.species,
            "title": self.title,
            "sections": [
                {"heading": s.heading, "items": list(s.items)} for s in self.sections
            ],
        }


@dataclass(frozen=True)
class Pattern:
    id: str
    title: str
    intent: Intent
    trigger: Trigger
    behaviors: tuple[BehaviorPrimitive, ...]
    affect: Affect
    summary: str
    note: str | None = None

    @property
    def primary_behavior(self) -> BehaviorPrimitive:
        return self.behaviors[0]

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "title": self.title,
            "intent": self.intent.value,
            "trigger": self.trigger.value,
            "behaviors": [b.value for b in self.behaviors],
            "affect": self.affect.value,
            "summary": self.summary,
            "suggested_presets": suggest_presets(self.primary_behavior),
        }
        if self.note:
            out["note"] = self.note
        return out


def _read_data(filename: str) -> Any:
    path = resources.files("mojikit.data").joinpath(filename)
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def load_cards() -> list[Card]:
    """The eight reference cards, in bundled order. Integrity-checked."""
    raw = _read_data("cards.json")
    cards: list[Card] = []
    for entry in raw.get("cards", []):
        sections = tuple(
            CardSection(sec["heading"], tuple(sec["items"]))
            for sec in entry["sections"]
        )
        cards.append(Card(
            id=entry["id"],
            module=entry["module"],
            species=entry.get("species"),
            title=entry["title"],
            sections=sections,
        ))

    if len(cards) != CARD_COUNT:
        raise DatasetError(f"expected {CARD_COUNT} cards, found {len(cards)}")
    ids = [c.id for c in cards]
    if len(set(ids)) != len(ids):
        raise DatasetError("card ids are not unique")
    by_module = {m: [c for c in cards if c.module == m] for m in CARD_MODULES}
    unknown = [c.id for c in cards if c.module not in CARD_MODULES]
    if unknown:
        raise DatasetError(f"cards with unknown module: {unknown}")
    if len(by_module["human_centric"]) != 3:
        raise DatasetError("expected 3 human-centric cards")
    if len(by_module["environmental"]) != 1:
        raise DatasetError("expected 1 environmental card")
    animal = by_module["animal_centric"]
    if len(animal) != 4:
        raise DatasetError("expected 4 animal-centric cards")
    species = sorted(c.species or "" for c in animal)
    if species != ["cat", "cat", "dog", "dog"]:
        raise DatasetError("animal-centric cards must split 2 cat / 2 dog")
    for c in cards:
        if not c.sections or any(not s.items for s in c.sections):
            raise DatasetError(f"card {c.id} has empty sections")
    return cards


def _enum(kind: type, value: Any, where: str) -> Any:
    try:
        return kind(value)
    except ValueError:
        raise DatasetError(f"{where}: unknown {kind.__name__} {value!r}") from None


def load_patterns() -> list[Pattern]:
    """All 35 interaction patterns, in id order. Integrity-checked."""
    raw = _read_data("patterns.json")
    patterns: list[Pattern] = []
    for entry in raw.get("patterns", []):
        pid = entry.get("id", "?")
        behaviors = tuple(
            _enum(BehaviorPrimitive, b, pid) for b in entry.get("behaviors", [])
        )
        if not behaviors:
            raise DatasetError(f"{pid}: no behaviors listed")
        patterns.append(Pattern(
            id=pid,
            title=entry["title"],
            intent=_enum(Intent, entry.get("intent"), pid),
            trigger=_enum(Trigger, entry.get("trigger"), pid),
            behaviors=behaviors,
            affect=_enum(Affect, entry.get("affect"), pid),
            summary=entry["summary"],
            note=entry.get("note"),
        ))

    if len(patterns) != PATTERN_COUNT:
        raise DatasetError(f"expected {PATTERN_COUNT} patterns, found {len(patterns)}")
    ids = [p.id for p in patterns]
    if len(set(ids)) != len(ids):
        raise DatasetError("pattern ids are not unique")
    return patterns


def query_patterns(patterns: list[Pattern], *,
                   intent: Intent | None = None,
                   trigger: Trigger | None = None,
                   behavior: BehaviorPrimitive | None = None,
                   affect: Affect | None = None) -> list[Pattern]:
    """Conjunctive filter; the behavior filter matches any listed behavior.

    Input order (id order for the bundled dataset) is preserved.
    """
    out = []
    for p in patterns:
        if intent is not None and p.intent is not intent:
            continue
        if trigger is not None and p.trigger is not trigger:
            continue
        if behavior is not None and behavior not in p.behaviors:
            continue
        if affect is not None and p.affect is not affect:
            continue
        out.append(p)
    return out


@dataclass(frozen=True)
class StatRow:
    category: str
    count: int
    percent: float


def compute_stats(patterns: list[Pattern]) -> dict[str, list[StatRow]]:
    """Per-dimension marginals: count and percent of the pattern total.

    Percent is round(100 * n / total, 1). The behavior dimension counts each
    pattern's primary behavior only, so all four dimensions sum to the total.
    Categories appear in declaration order, including zero counts.
    """
    total = len(patterns)

    def rows(kind: type, key) -> list[StatRow]:
        counts = {member: 0 for member in kind}
        for p in patterns:
            counts[key(p)] += 1
        return [
            StatRow(member.value, n, round(100.0 * n / total, 1) if total else 0.0)
            for member, n in counts.items()
        ]

    return {
        "intent": rows(Intent, lambda p: p.intent),
        "trigger": rows(Trigger, lambda p: p.trigger),
        "behavior": rows(BehaviorPrimitive, lambda p: p.primary_behavior),
        "affect": rows(Affect, lambda p: p.affect),
    }


# Studio insertion hints: motion presets that sketch each behavior primitive.
# Locomotion and sound have no joint-space equivalent on this body, so their
# suggestions lean on the closest expressive posture (or none).
PRESET_SUGGESTIONS: dict[BehaviorPrimitive, tuple[str, ...]] = {
    BehaviorPrimitive.HEAD_TURN_NOD: ("nod", "head_turn_left", "head_turn_right"),
    BehaviorPrimitive.APPROACH: ("greet_combo", "stretch"),
    BehaviorPrimitive.TAIL_WAG: ("tail_wag",),
    BehaviorPrimitive.PAW_TAP_CONTACT: ("paw_tap", "paw_lift", "both_paws_up"),
    BehaviorPrimitive.VOCALIZATION: ("ear_perk", "nod"),
    BehaviorPrimitive.LIE_CURL_ROLL: ("curl_up", "roll"),
    BehaviorPrimitive.RETREAT_AVOID: ("ear_fold", "head_shake"),
    BehaviorPrimitive.OTHER_COMPLEX: ("greet_combo", "roll", "stretch"),
}


def suggest_presets(behavior: BehaviorPrimitive) -> list[str]:
    """Preset names that sketch the behavior primitive; possibly empty."""
    return list(PRESET_SUGGESTIONS.get(behavior, ()))
