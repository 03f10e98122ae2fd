"""Session-level performance metrics over constituent-character streams.

All four headline measures are classic text-entry metrics re-based onto
the flattened output stream, so techniques that commit conjuncts or
whole glyph units in one action are compared fairly with per-character
keyboards:

* ``wpm_bn``   words per minute, (|OS_T| - 1) / S * 60 / word_length
* ``kspc_bn``  keystrokes per character, |IS| / |OS_T|
* ``er_bn``    uncorrected error rate, INF / |OS_T| * 100
* ``msder_bn`` MSD error rate, MSD / max(|OS_P|, |OS_T|) * 100

plus the combined total error rate (INF + IF) / (C + INF + IF) * 100.
The default word length of 5.11 constituent characters comes from a
Bengali corpus average; pass your own for a different corpus (see the
``corpus-stats`` command).

``naive_metrics`` runs the identical pipeline with grapheme clusters as
the unit of counting instead of constituents, reproducing the older
convention for side-by-side comparison.  On conjunct-free text the two
agree exactly; conjuncts pull the naive lengths down and distort rates.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .bengali import BENGALI_TABLE, CharTable, segment_graphemes, to_output_stream
from .errors import (
    AbugidaError,
    EmptyGroupError,
    EmptySessionError,
    EmptyStreamsError,
    EmptyTranscriptionError,
    ZeroDurationError,
)
from .msd import CostMode, CostModel, TechniqueProfile, align_symbols, msd
from .streams import (
    KeyEventKind,
    KeystrokeTaxonomy,
    build_input_stream,
    replay_events,
    session_duration_s,
)

if TYPE_CHECKING:
    from .sessionio import SessionRecord

__all__ = [
    "DEFAULT_WORD_LENGTH_CHARS",
    "METRIC_FIELDS",
    "RATE_FIELDS",
    "MetricConfig",
    "SessionIntermediates",
    "SessionMetrics",
    "TechniqueSummary",
    "wpm_bn",
    "kspc_bn",
    "er_bn",
    "msder_bn",
    "total_error_rate",
    "analyze_session",
    "naive_metrics",
    "aggregate",
]

# Average Bengali word length in constituent characters.
DEFAULT_WORD_LENGTH_CHARS = 5.11

# Field order is the canonical column order of every report.
METRIC_FIELDS = ("wpm_bn", "kspc_bn", "er_bn", "msder_bn", "total_error_rate")

# Metrics that are percentages (get a % suffix in CSV output).
RATE_FIELDS = frozenset({"er_bn", "msder_bn", "total_error_rate"})


@dataclass(frozen=True)
class MetricConfig:
    """Knobs shared by every metric computation."""

    word_length_chars: float = DEFAULT_WORD_LENGTH_CHARS
    msd_cost_mode: CostMode = CostMode.PAPER_LITERAL
    naive_mode: bool = False
    table: CharTable = BENGALI_TABLE

    def __post_init__(self) -> None:
        if isinstance(self.msd_cost_mode, str) and not isinstance(self.msd_cost_mode, CostMode):
            object.__setattr__(self, "msd_cost_mode", CostMode(self.msd_cost_mode))
        if self.word_length_chars <= 0:
            raise ValueError("word length must be positive")


@dataclass(frozen=True)
class SessionIntermediates:
    """Audit trail of the quantities the metrics were computed from.

    In naive mode the stream lengths, INF, and MSD are measured in
    grapheme clusters rather than constituent characters.
    """

    is_length: int
    os_p_length: int
    os_t_length: int
    inf: int
    msd: float
    seconds: float
    correct: int
    incorrect_fixed: int
    fixes: int


@dataclass(frozen=True)
class SessionMetrics:
    session_id: str
    technique_id: str
    participant_id: str
    wpm_bn: float
    kspc_bn: float
    er_bn: float
    msder_bn: float
    total_error_rate: float
    intermediates: SessionIntermediates


@dataclass(frozen=True)
class TechniqueSummary:
    """Per-technique mean and sample standard deviation of each metric."""

    technique_id: str
    n_sessions: int
    means: dict[str, float]
    sds: dict[str, float]


def wpm_bn(os_t_length: int, seconds: float,
           word_length_chars: float = DEFAULT_WORD_LENGTH_CHARS) -> float:
    """Words per minute over the transcribed stream.

    The -1 discounts the first character, before which no timed entry
    has happened.  A one-character transcription therefore scores 0
    regardless of duration.
    """
    if word_length_chars <= 0:
        raise ValueError("word length must be positive")
    if os_t_length <= 0:
        raise EmptyTranscriptionError("transcribed stream is empty")
    if os_t_length == 1:
        return 0.0
    if seconds <= 0:
        raise ZeroDurationError("text entered in zero elapsed time")
    return (os_t_length - 1) / seconds * 60.0 / word_length_chars


def kspc_bn(is_length: int, os_t_length: int) -> float:
    """Keystrokes per constituent character: |IS| / |OS_T|.

    Below 1.0 only when whole-unit keys commit several characters at
    once; above 1.0 whenever correction inflates the input stream.
    """
    if os_t_length <= 0:
        raise EmptyTranscriptionError("transcribed stream is empty")
    if is_length <= 0:
        raise EmptySessionError("input stream is empty")
    return is_length / os_t_length


def er_bn(inf: int, os_t_length: int) -> float:
    """Uncorrected error rate: INF / |OS_T| * 100."""
    if os_t_length <= 0:
        raise EmptyTranscriptionError("transcribed stream is empty")
    if inf < 0:
        raise ValueError("INF cannot be negative")
    return inf / os_t_length * 100.0


def msder_bn(msd_value: float, os_p_length: int, os_t_length: int) -> float:
    """MSD error rate: MSD / max(|OS_P|, |OS_T|) * 100."""
    longest = max(os_p_length, os_t_length)
    if longest <= 0:
        raise EmptyStreamsError("both streams are empty")
    if msd_value < 0:
        raise ValueError("distance cannot be negative")
    return msd_value / longest * 100.0


def total_error_rate(correct: int, incorrect_not_fixed: int,
                     incorrect_fixed: int) -> float:
    """Combined error rate: (INF + IF) / (C + INF + IF) * 100."""
    denom = correct + incorrect_not_fixed + incorrect_fixed
    if denom <= 0:
        raise EmptyStreamsError("no classified characters")
    return (incorrect_not_fixed + incorrect_fixed) / denom * 100.0


def _evaluate(session: "SessionRecord",
              profile: TechniqueProfile | None,
              config: MetricConfig,
              naive: bool) -> SessionMetrics:
    table = config.table
    cost = CostModel(config.msd_cost_mode)

    if naive:
        sym_p = tuple(c.text for c in segment_graphemes(session.presented, table))
        sym_t = tuple(c.text for c in segment_graphemes(session.transcribed, table))
        p_len, t_len = len(sym_p), len(sym_t)
        if t_len == 0:
            raise EmptyTranscriptionError("transcribed text is empty")
        alignment = align_symbols(sym_t, sym_p, None, None, cost)
    else:
        os_p = to_output_stream(session.presented, table)
        os_t = to_output_stream(session.transcribed, table)
        p_len, t_len = os_p.length, os_t.length
        if t_len == 0:
            raise EmptyTranscriptionError("transcribed text is empty")
        alignment = msd(os_t, os_p, profile, cost, table)

    stream = build_input_stream(session.events)
    seconds = session_duration_s(stream)
    inf = session.inf_override if session.inf_override is not None else alignment.inf

    # The naive convention ignores technique structure, so its replay is
    # permissive and erased material is counted in clusters.
    replay = replay_events(stream, None if naive else profile, table)
    if naive:
        incorrect_fixed = sum(
            len(segment_graphemes(atom, table)) for atom in replay.erased)
    else:
        incorrect_fixed = sum(
            to_output_stream(atom, table).length for atom in replay.erased)
    fixes = sum(1 for e in stream
                if e.kind in (KeyEventKind.BACKSPACE, KeyEventKind.EDIT))
    taxonomy = KeystrokeTaxonomy(
        correct=t_len - inf,
        incorrect_fixed=incorrect_fixed,
        fixes=fixes,
        incorrect_not_fixed=inf,
    )

    return SessionMetrics(
        session_id=session.session_id,
        technique_id=session.technique_id,
        participant_id=session.participant_id,
        wpm_bn=wpm_bn(t_len, seconds, config.word_length_chars),
        kspc_bn=kspc_bn(stream.length, t_len),
        er_bn=er_bn(inf, t_len),
        msder_bn=msder_bn(alignment.distance, p_len, t_len),
        total_error_rate=total_error_rate(
            taxonomy.correct, taxonomy.incorrect_not_fixed, taxonomy.incorrect_fixed),
        intermediates=SessionIntermediates(
            is_length=stream.length,
            os_p_length=p_len,
            os_t_length=t_len,
            inf=inf,
            msd=alignment.distance,
            seconds=seconds,
            correct=taxonomy.correct,
            incorrect_fixed=taxonomy.incorrect_fixed,
            fixes=taxonomy.fixes,
        ),
    )


def _with_session_context(session: "SessionRecord", err: AbugidaError) -> AbugidaError:
    return type(err)(f"session {session.session_id}: {err}")


def analyze_session(session: "SessionRecord",
                    profile: TechniqueProfile | None,
                    config: MetricConfig = MetricConfig()) -> SessionMetrics:
    """Compute every metric for one session under one technique profile.

    Honors ``session.inf_override`` when present; otherwise INF comes
    from the alignment.  Errors raised by any stage propagate with the
    session id prefixed.
    """
    if config.naive_mode:
        return naive_metrics(session, config)
    try:
        return _evaluate(session, profile, config, naive=False)
    except AbugidaError as err:
        raise _with_session_context(session, err) from err


def naive_metrics(session: "SessionRecord",
                  config: MetricConfig = MetricConfig()) -> SessionMetrics:
    """The same pipeline with grapheme clusters as the counting unit."""
    try:
        return _evaluate(session, None, config, naive=True)
    except AbugidaError as err:
        raise _with_session_context(session, err) from err


def aggregate(results: Sequence[SessionMetrics]) -> list[TechniqueSummary]:
    """Group sessions by technique and summarize each metric.

    Means use every session in the group; the standard deviation is the
    sample SD, reported as 0 for a single session.  Values are sorted
    before summing so the result is identical under any permutation of
    the input, and techniques come out in lexicographic order.
    """
    if not results:
        raise EmptyGroupError("no sessions to aggregate")
    groups: dict[str, list[SessionMetrics]] = {}
    for r in results:
        groups.setdefault(r.technique_id, []).append(r)
    out: list[TechniqueSummary] = []
    for technique_id in sorted(groups):
        rows = groups[technique_id]
        means: dict[str, float] = {}
        sds: dict[str, float] = {}
        for metric in METRIC_FIELDS:
            values = sorted(getattr(r, metric) for r in rows)
            means[metric] = statistics.fmean(values)
            sds[metric] = statistics.stdev(values) if len(values) >= 2 else 0.0
        out.append(TechniqueSummary(technique_id, len(rows), means, sds))
    return out
