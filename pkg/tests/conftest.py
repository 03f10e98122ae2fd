"""Shared fixtures: the worked single-session example used throughout.

One participant transcribes ক্ষণিকের অতিথি (14 constituents) with a
conjunct-key technique, commits ক্ষ as one unit, holds one modifier,
and omits the ি of অতিথি: 12 keystrokes over 20 seconds, transcribed
stream of 13, one uncorrected omission.  Every layer of the pipeline
has a hand-checkable number here.
"""

from __future__ import annotations

import json

import pytest

import abugida as ab

PRESENTED = "ক্ষণিকের অতিথি"
TRANSCRIBED = "ক্ষণিকের অতথি"

_TAIL_CHARS = ["ণ", "ি", "ক", "ে", "র", " ", "অ", "ত", "থ", "ি"]
_TAIL_TIMES = [3000, 4500, 6000, 7500, 9000, 10500, 12000, 14000, 16000, 20000]


def _sidebar_events() -> list[ab.KeyEvent]:
    events = [ab.KeyEvent(0, "unit", "ক্ষ"), ab.KeyEvent(1500, "mod")]
    events += [ab.KeyEvent(t, "char", c)
               for t, c in zip(_TAIL_TIMES, _TAIL_CHARS)]
    return events


@pytest.fixture
def sidebar_profile() -> ab.TechniqueProfile:
    return ab.TechniqueProfile(
        technique_id="conjunct-key",
        atomic_units=frozenset({"ক্ষ"}),
        unit_keys={"KSHA": "ক্ষ"},
        backspace_granularity="unit",
    )


@pytest.fixture
def sidebar_events() -> list[ab.KeyEvent]:
    return _sidebar_events()


@pytest.fixture
def sidebar_record(sidebar_events) -> ab.SessionRecord:
    return ab.SessionRecord(
        session_id="s1",
        technique_id="conjunct-key",
        participant_id="p1",
        presented=PRESENTED,
        transcribed=TRANSCRIBED,
        events=tuple(sidebar_events),
    )


def sidebar_log_obj(session_id: str = "s1", participant_id: str = "p1") -> dict:
    events = [{"t": 0, "k": "unit", "p": "ক্ষ"}, {"t": 1500, "k": "mod", "p": ""}]
    events += [{"t": t, "k": "char", "p": c}
               for t, c in zip(_TAIL_TIMES, _TAIL_CHARS)]
    return {
        "session_id": session_id,
        "technique_id": "conjunct-key",
        "participant_id": participant_id,
        "presented": PRESENTED,
        "transcribed": TRANSCRIBED,
        "inf_override": None,
        "events": events,
    }


def sidebar_profile_obj() -> dict:
    return {
        "technique_id": "conjunct-key",
        "atomic_units": ["ক্ষ"],
        "unit_keys": {"KSHA": "ক্ষ"},
        "backspace_granularity": "unit",
    }


def write_jsonl(path, objs) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return str(path)


def write_json(path, obj) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=1)
    return str(path)


@pytest.fixture
def sidebar_log_file(tmp_path) -> str:
    return write_jsonl(tmp_path / "log.jsonl", [sidebar_log_obj()])


@pytest.fixture
def sidebar_profile_file(tmp_path) -> str:
    return write_json(tmp_path / "conjunct-key.json", sidebar_profile_obj())
