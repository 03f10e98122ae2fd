"""Command line interface.

Subcommands: analyze, decompose, msd, corpus-stats, compare-naive,
validate-log.  Data goes to stdout (or --out); warnings and errors go
to stderr only.  Exit codes: 0 success, 1 unreadable or malformed
inputs, 2 unresolved technique profiles, 3 validate-log found sessions
that do not replay to their stored transcription.

Set ABUGIDA_TABLE to a classification table file to override the
built-in Bengali table for every command.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from .bengali import (
    BENGALI_TABLE,
    CharTable,
    load_table_file,
    segment_graphemes,
    to_output_stream,
)
from .errors import AbugidaError, EncodingError, InvalidEncodingError, ParseError
from .metrics import (
    DEFAULT_WORD_LENGTH_CHARS,
    MetricConfig,
    SessionMetrics,
    aggregate,
    analyze_session,
    naive_metrics,
)
from .msd import CostModel, CostMode, TechniqueProfile, msd
from .sessionio import (
    SessionRecord,
    corpus_word_length,
    load_phrase_set,
    parse_session_log,
    parse_technique_profile,
    write_analysis_report,
    write_compare_report,
)
from .streams import replay_transcription

__all__ = ["main"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PROFILES = 2
EXIT_MISMATCH = 3


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _read_file(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _emit(data: bytes, out: str | None) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
        return
    buffer = getattr(sys.stdout, "buffer", None)
    if buffer is not None:
        buffer.write(data)
        buffer.flush()
    else:  # captured streams in tests may be text-only
        sys.stdout.write(data.decode("utf-8"))


def _load_table() -> CharTable:
    path = os.environ.get("ABUGIDA_TABLE")
    if not path:
        return BENGALI_TABLE
    return load_table_file(path)


def _load_profiles(path: str, table: CharTable) -> dict[str, TechniqueProfile]:
    """Load one profile file or every *.json in a directory."""
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(".json"))
        paths = [os.path.join(path, n) for n in names]
        if not paths:
            raise ParseError(f"no profile files in {path}")
    else:
        paths = [path]
    profiles: dict[str, TechniqueProfile] = {}
    for p in paths:
        profile = parse_technique_profile(_read_file(p), table)
        if profile.technique_id in profiles:
            raise ParseError(
                f"duplicate profile for technique {profile.technique_id!r}")
        profiles[profile.technique_id] = profile
    return profiles


def _parse_log(path: str, table: CharTable) -> list[SessionRecord]:
    records = parse_session_log(_read_file(path), table)
    if not records:
        raise ParseError(f"{path} contains no sessions")
    return records


def _unresolved(records: Sequence[SessionRecord],
                profiles: dict[str, TechniqueProfile]) -> list[str]:
    return sorted({r.technique_id for r in records} - set(profiles))


def _map_sessions(fn: Callable[[SessionRecord], SessionMetrics],
                  records: Sequence[SessionRecord],
                  jobs: int) -> list[SessionMetrics]:
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, records))  # map preserves input order
    return [fn(r) for r in records]


def _cmd_analyze(args: argparse.Namespace, table: CharTable) -> int:
    try:
        profiles = _load_profiles(args.profiles, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_PROFILES
    try:
        records = _parse_log(args.log, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_INPUT
    missing = _unresolved(records, profiles)
    if missing:
        _fail("no technique profile for: " + ", ".join(missing))
        return EXIT_PROFILES
    config = MetricConfig(word_length_chars=args.word_length,
                          msd_cost_mode=CostMode(args.msd_cost_mode),
                          table=table)
    try:
        results = _map_sessions(
            lambda r: analyze_session(r, profiles[r.technique_id], config),
            records, args.jobs)
    except AbugidaError as err:
        _fail(str(err))
        return EXIT_INPUT
    summaries = aggregate(results)
    _emit(write_analysis_report(
        summaries, results if args.per_session else None, args.format),
        args.out)
    return EXIT_OK


def _cmd_compare_naive(args: argparse.Namespace, table: CharTable) -> int:
    try:
        profiles = _load_profiles(args.profiles, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_PROFILES
    try:
        records = _parse_log(args.log, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_INPUT
    missing = _unresolved(records, profiles)
    if missing:
        _fail("no technique profile for: " + ", ".join(missing))
        return EXIT_PROFILES
    config = MetricConfig(word_length_chars=args.word_length,
                          msd_cost_mode=CostMode(args.msd_cost_mode),
                          table=table)
    try:
        proposed = _map_sessions(
            lambda r: analyze_session(r, profiles[r.technique_id], config),
            records, args.jobs)
        naive = _map_sessions(
            lambda r: naive_metrics(r, config), records, args.jobs)
    except AbugidaError as err:
        _fail(str(err))
        return EXIT_INPUT
    _emit(write_compare_report(aggregate(proposed), aggregate(naive),
                               args.format), args.out)
    return EXIT_OK


def _cmd_decompose(args: argparse.Namespace, table: CharTable) -> int:
    try:
        if args.graphemes:
            clusters = segment_graphemes(args.text, table)
            lines = [f"{c.text}\t{c.constituent_count}" for c in clusters]
            lines.append(f"clusters\t{len(clusters)}")
        else:
            stream = to_output_stream(args.text, table)
            lines = [f"{b.char}\tU+{b.codepoint:04X}\t{b.category.value}"
                     for b in stream]
            lines.append(f"length\t{stream.length}")
    except (InvalidEncodingError, EncodingError) as err:
        _fail(str(err))
        return EXIT_INPUT
    _emit(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


def _cmd_msd(args: argparse.Namespace, table: CharTable) -> int:
    profile = None
    if args.profile:
        try:
            profile = parse_technique_profile(_read_file(args.profile), table)
        except (AbugidaError, OSError) as err:
            _fail(str(err))
            return EXIT_PROFILES
    try:
        a = to_output_stream(args.phrase_a, table)
        b = to_output_stream(args.phrase_b, table)
    except (InvalidEncodingError, EncodingError) as err:
        _fail(str(err))
        return EXIT_INPUT
    result = msd(a, b, profile, CostModel(CostMode(args.msd_cost_mode)), table)
    lines = [f"distance\t{result.distance:g}"]
    for op in result.script:
        lines.append(f"{op.kind.value}\t{op.pos_a}\t{op.pos_b}"
                     f"\t{op.source_text}\t{op.target_text}\t{op.cost:g}")
    _emit(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


def _cmd_corpus_stats(args: argparse.Namespace, table: CharTable) -> int:
    try:
        phrase_set = load_phrase_set(_read_file(args.phrases), args.phrases, table)
        average = corpus_word_length(phrase_set, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_INPUT
    total_chars = sum(to_output_stream(p, table).length
                      for p in phrase_set.phrases)
    total_words = sum(len(p.split()) for p in phrase_set.phrases)
    lines = [
        f"phrases\t{len(phrase_set.phrases)}",
        f"words\t{total_words}",
        f"stream_chars\t{total_chars}",
        f"avg_word_length_chars\t{average:.4f}",
        f"delta_vs_default\t{average - DEFAULT_WORD_LENGTH_CHARS:+.4f}",
    ]
    _emit(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


def _cmd_validate_log(args: argparse.Namespace, table: CharTable) -> int:
    try:
        profiles = _load_profiles(args.profiles, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_PROFILES
    try:
        records = _parse_log(args.log, table)
    except (AbugidaError, OSError) as err:
        _fail(str(err))
        return EXIT_INPUT
    missing = _unresolved(records, profiles)
    if missing:
        _fail("no technique profile for: " + ", ".join(missing))
        return EXIT_PROFILES
    lines = []
    clean = True
    for record in records:
        try:
            replayed = replay_transcription(
                record.events, profiles[record.technique_id], table)
        except AbugidaError as err:
            lines.append(f"{record.session_id}\tERROR\t{err}")
            clean = False
            continue
        if replayed == record.transcribed:
            lines.append(f"{record.session_id}\tMATCH")
        else:
            lines.append(f"{record.session_id}\tMISMATCH\treplayed "
                         f"{replayed!r}, log says {record.transcribed!r}")
            clean = False
    _emit(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK if clean else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abugida",
        description="Text-entry performance metrics for Bengali session logs.")
    sub = parser.add_subparsers(metavar="command", required=True)

    def add_metric_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--word-length", type=float,
                       default=DEFAULT_WORD_LENGTH_CHARS, metavar="CHARS",
                       help="average word length in constituent characters "
                            f"(default {DEFAULT_WORD_LENGTH_CHARS})")
        p.add_argument("--msd-cost-mode", choices=("paper", "normalized"),
                       default="paper",
                       help="unit operation pricing (default paper: 1/n)")

    def add_output_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", metavar="FILE",
                       help="write output here instead of stdout")

    p = sub.add_parser("analyze", help="compute per-technique metrics from a log")
    p.add_argument("log", help="JSON Lines session log")
    p.add_argument("--profiles", required=True, metavar="PATH",
                   help="technique profile JSON file or directory of them")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--per-session", action="store_true",
                   help="also emit one row per session")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="analyze sessions with N worker threads")
    add_metric_flags(p)
    add_output_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("decompose",
                       help="show a text's constituent characters")
    p.add_argument("text")
    p.add_argument("--graphemes", action="store_true",
                   help="show grapheme clusters instead")
    add_output_flags(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("msd", help="minimum string distance between two texts")
    p.add_argument("phrase_a", metavar="A")
    p.add_argument("phrase_b", metavar="B")
    p.add_argument("--profile", metavar="FILE",
                   help="technique profile enabling whole-unit operations")
    p.add_argument("--msd-cost-mode", choices=("paper", "normalized"),
                   default="paper")
    add_output_flags(p)
    p.set_defaults(func=_cmd_msd)

    p = sub.add_parser("corpus-stats",
                       help="word-length statistics of a phrase set")
    p.add_argument("phrases", help="phrase set file, one phrase per line")
    add_output_flags(p)
    p.set_defaults(func=_cmd_corpus_stats)

    p = sub.add_parser("compare-naive",
                       help="constituent-based vs grapheme-cluster metrics")
    p.add_argument("log")
    p.add_argument("--profiles", required=True, metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    add_metric_flags(p)
    add_output_flags(p)
    p.set_defaults(func=_cmd_compare_naive)

    p = sub.add_parser("validate-log",
                       help="replay each session and check the transcription")
    p.add_argument("log")
    p.add_argument("--profiles", required=True, metavar="PATH")
    add_output_flags(p)
    p.set_defaults(func=_cmd_validate_log)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        table = _load_table()
    except (AbugidaError, OSError) as err:
        _fail(f"ABUGIDA_TABLE: {err}")
        return EXIT_INPUT
    return args.func(args, table)


if __name__ == "__main__":
    sys.exit(main())
