"""Keystroke input streams: building, timing, replay, and taxonomy.

The input stream is every key action the participant performed, in
time order: text-producing keys (single characters or whole atomic
units), backspaces, edit keys, and modifiers.  Its length |IS| counts
all of them, which is what makes KSPC sensitive to correction effort.

Replay reconstructs the transcribed text from the events alone, which
both validates a log and yields the erased material needed to split
keystrokes into the classic four classes: correct (C), incorrect but
fixed (IF), fixes (F), and incorrect and not fixed (INF).  Cursor
movement ("edit" events) is rejected rather than guessed at: without a
caret model any reconstruction would be fiction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, unique
from typing import Iterable, Iterator, Sequence, Union

from .bengali import BENGALI_TABLE, CharTable, OutputStream, normalize, to_output_stream
from .errors import (
    EmptySessionError,
    ReplayUnderflowError,
    UnknownUnitError,
    UnsupportedKeyError,
)
from .msd import BackspaceGranularity, TechniqueProfile

__all__ = [
    "KeyEventKind",
    "KeyEvent",
    "InputStream",
    "ReplayResult",
    "KeystrokeTaxonomy",
    "build_input_stream",
    "session_duration_s",
    "replay_events",
    "replay_transcription",
    "classify_keystrokes",
]


@unique
class KeyEventKind(str, Enum):
    """Tags match the ``k`` field of the session log format."""

    CHAR = "char"
    UNIT = "unit"
    BACKSPACE = "bksp"
    EDIT = "edit"
    MODIFIER = "mod"


_TEXTLESS = (KeyEventKind.BACKSPACE, KeyEventKind.EDIT, KeyEventKind.MODIFIER)


@dataclass(frozen=True, slots=True)
class KeyEvent:
    """One key action at a millisecond timestamp."""

    t_ms: int
    kind: KeyEventKind
    payload: str = ""

    def __post_init__(self) -> None:
        if isinstance(self.kind, str) and not isinstance(self.kind, KeyEventKind):
            object.__setattr__(self, "kind", KeyEventKind(self.kind))
        if self.t_ms < 0:
            raise ValueError(f"negative timestamp: {self.t_ms}")
        if self.kind in _TEXTLESS and self.payload:
            raise ValueError(f"{self.kind.value} events carry no payload")


@dataclass(frozen=True)
class InputStream:
    """Time-ordered keystroke sequence; |IS| is its length."""

    events: tuple[KeyEvent, ...]

    @property
    def length(self) -> int:
        return len(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[KeyEvent]:
        return iter(self.events)


@dataclass(frozen=True)
class ReplayResult:
    """Replay outcome: the surviving text and what got erased, in order."""

    text: str
    erased: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class KeystrokeTaxonomy:
    """C / IF / F / INF split of a session's keystrokes."""

    correct: int
    incorrect_fixed: int
    fixes: int
    incorrect_not_fixed: int


Events = Union[InputStream, Sequence[KeyEvent], Iterable[KeyEvent]]


def _event_list(events: Events) -> list[KeyEvent]:
    if isinstance(events, InputStream):
        return list(events.events)
    out = list(events)
    out.sort(key=lambda e: e.t_ms)  # stable, so equal stamps keep log order
    return out


def build_input_stream(events: Events) -> InputStream:
    """Order events by timestamp into an input stream.

    The sort is stable: events sharing a timestamp keep their log order.
    Raises :class:`EmptySessionError` for an empty sequence.
    """
    ordered = _event_list(events)
    if not ordered:
        raise EmptySessionError("session has no keystroke events")
    return InputStream(tuple(ordered))


def session_duration_s(stream: InputStream) -> float:
    """Elapsed seconds from first to last event; 0.0 for one event."""
    if not stream.events:
        raise EmptySessionError("session has no keystroke events")
    return (stream.events[-1].t_ms - stream.events[0].t_ms) / 1000.0


def replay_events(events: Events,
                  profile: TechniqueProfile | None = None,
                  table: CharTable = BENGALI_TABLE) -> ReplayResult:
    """Replay keystrokes into text, tracking erased material.

    Character events append their constituent characters one atom each;
    unit events append one whole-unit atom when the profile erases at
    unit granularity, else per-character atoms.  Backspace pops the most
    recent atom.  Modifiers produce nothing.  Edit events raise
    :class:`UnsupportedKeyError`; see the module docstring.

    With ``profile=None`` the replay is permissive: unit payloads are
    accepted without declaration and erased per character.  The strict
    mode raises :class:`UnknownUnitError` for undeclared unit payloads
    and :class:`ReplayUnderflowError` when backspace finds nothing.
    """
    unit_texts: set[str] | None = None
    per_unit = False
    if profile is not None:
        unit_texts = {normalize(u, table) for u in profile.atomic_units}
        per_unit = profile.backspace_granularity is BackspaceGranularity.UNIT

    atoms: list[str] = []
    erased: list[str] = []
    for ev in _event_list(events):
        if ev.kind is KeyEventKind.CHAR:
            atoms.extend(c.char for c in to_output_stream(ev.payload, table))
        elif ev.kind is KeyEventKind.UNIT:
            text = normalize(ev.payload, table)
            if unit_texts is not None and text not in unit_texts:
                raise UnknownUnitError(
                    f"unit payload {text!r} not declared by the profile")
            chars = [c.char for c in to_output_stream(text, table)]
            if per_unit:
                atoms.append("".join(chars))
            else:
                atoms.extend(chars)
        elif ev.kind is KeyEventKind.BACKSPACE:
            if not atoms:
                raise ReplayUnderflowError(
                    f"backspace at t={ev.t_ms}ms with nothing to erase")
            erased.append(atoms.pop())
        elif ev.kind is KeyEventKind.EDIT:
            raise UnsupportedKeyError(
                f"edit event at t={ev.t_ms}ms: cursor movement is not replayable")
        # modifiers produce no text
    return ReplayResult("".join(atoms), tuple(erased))


def replay_transcription(events: Events,
                         profile: TechniqueProfile,
                         table: CharTable = BENGALI_TABLE) -> str:
    """Reconstruct the transcribed text from the events, normalized."""
    return normalize(replay_events(events, profile, table).text, table)


def classify_keystrokes(events: Events,
                        os_t: OutputStream,
                        inf: int,
                        profile: TechniqueProfile | None = None,
                        table: CharTable = BENGALI_TABLE) -> KeystrokeTaxonomy:
    """Split a session's keystrokes into C / IF / F / INF.

    ``inf`` comes from the alignment (or a log override); ``os_t`` is the
    transcribed output stream.  C is defined by the conservation law
    C + INF = |OS_T|.  IF counts erased constituent characters and F
    counts the fixing actions themselves (backspaces and edit keys).
    Events must replay without error.
    """
    ordered = _event_list(events)
    result = replay_events(ordered, profile, table)
    incorrect_fixed = sum(
        to_output_stream(atom, table).length for atom in result.erased)
    fixes = sum(1 for e in ordered
                if e.kind in (KeyEventKind.BACKSPACE, KeyEventKind.EDIT))
    return KeystrokeTaxonomy(
        correct=os_t.length - inf,
        incorrect_fixed=incorrect_fixed,
        fixes=fixes,
        incorrect_not_fixed=inf,
    )
