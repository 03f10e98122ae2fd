"""Bengali script classification, normalization, and stream decomposition.

Bengali, like the other Brahmic abugidas, renders consonant clusters and
consonant-vowel combinations as single glyphs: কান্ড appears as two visual
units (কা and ন্ড) but is encoded, and typed on character-level keyboards,
as five constituent codepoints (ক + া + ন + ্ + ড).  Text-entry analysis
therefore needs two views of the same text:

* the **output stream**, the fully flattened sequence of basic characters
  (consonants, vowels, vowel signs, the virama joiner, modifier signs,
  digits, whitespace) produced by :func:`to_output_stream`;
* the legacy **grapheme cluster** view, one symbol per visual unit,
  produced by :func:`segment_graphemes` and kept only for differential
  comparison against older character-counting conventions.

Both views agree on totals: the constituent counts of the clusters of a
text sum to its output-stream length.

Classification and pairwise composition are table driven so another
script can be swapped in from a plain text table file (see
:func:`load_table_file`); the built-in :data:`BENGALI_TABLE` covers the
Bengali block U+0980..U+09FF.  Normalization applies NFC first and then
the table's composition pairs; the second pass matters because NFC
deliberately leaves some precomposed letters (ড় ঢ় য়) in decomposed
form, and we want one canonical spelling per text before any counting.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum, unique
from typing import Iterable, Iterator, Mapping

from .errors import EncodingError, InvalidEncodingError, ParseError

__all__ = [
    "CodepointClass",
    "BasicChar",
    "OutputStream",
    "GraphemeCluster",
    "CharTable",
    "BENGALI_TABLE",
    "ZERO_WIDTH_CONTROLS",
    "classify_codepoint",
    "normalize",
    "to_output_stream",
    "segment_graphemes",
    "recompose",
    "load_table_file",
]


@unique
class CodepointClass(str, Enum):
    """Classification of a single codepoint for stream building."""

    INDEPENDENT_VOWEL = "IndependentVowel"
    CONSONANT = "Consonant"
    DEPENDENT_VOWEL_SIGN = "DependentVowelSign"
    VIRAMA = "Virama"
    MODIFIER_SIGN = "ModifierSign"
    DIGIT = "Digit"
    WHITESPACE = "Whitespace"
    ZERO_WIDTH_CONTROL = "ZeroWidthControl"
    OTHER = "Other"


# Format controls that shape rendering but are never counted as text.
ZERO_WIDTH_CONTROLS = frozenset({
    0x200B,  # zero width space
    0x200C,  # zero width non-joiner
    0x200D,  # zero width joiner
    0x2060,  # word joiner
    0xFEFF,  # zero width no-break space / BOM
})

# Bengali block, by range.  Unlisted codepoints fall through to the
# zero-width / whitespace / Other defaults in CharTable.classify.
_BENGALI_RANGES: tuple[tuple[int, int, CodepointClass], ...] = (
    (0x0981, 0x0983, CodepointClass.MODIFIER_SIGN),         # ঁ ং ঃ candrabindu, anusvara, visarga
    (0x0985, 0x098C, CodepointClass.INDEPENDENT_VOWEL),     # অ আ ই ঈ উ ঊ ঋ ঌ
    (0x098F, 0x0990, CodepointClass.INDEPENDENT_VOWEL),     # এ ঐ
    (0x0993, 0x0994, CodepointClass.INDEPENDENT_VOWEL),     # ও ঔ
    (0x0995, 0x09A8, CodepointClass.CONSONANT),             # ক .. ন
    (0x09AA, 0x09B0, CodepointClass.CONSONANT),             # প .. র
    (0x09B2, 0x09B2, CodepointClass.CONSONANT),             # ল
    (0x09B6, 0x09B9, CodepointClass.CONSONANT),             # শ ষ স হ
    (0x09BC, 0x09BC, CodepointClass.MODIFIER_SIGN),         # nukta
    (0x09BD, 0x09BD, CodepointClass.OTHER),                 # avagraha
    (0x09BE, 0x09C4, CodepointClass.DEPENDENT_VOWEL_SIGN),  # া ি ী ু ূ ৃ ৄ
    (0x09C7, 0x09C8, CodepointClass.DEPENDENT_VOWEL_SIGN),  # ে ৈ
    (0x09CB, 0x09CC, CodepointClass.DEPENDENT_VOWEL_SIGN),  # ো ৌ
    (0x09CD, 0x09CD, CodepointClass.VIRAMA),                # ্ hasanta
    (0x09CE, 0x09CE, CodepointClass.CONSONANT),             # ৎ khanda ta
    (0x09D7, 0x09D7, CodepointClass.DEPENDENT_VOWEL_SIGN),  # ৗ au length mark
    (0x09DC, 0x09DD, CodepointClass.CONSONANT),             # ড় ঢ়
    (0x09DF, 0x09DF, CodepointClass.CONSONANT),             # য়
    (0x09E0, 0x09E1, CodepointClass.INDEPENDENT_VOWEL),     # ৠ ৡ
    (0x09E2, 0x09E3, CodepointClass.DEPENDENT_VOWEL_SIGN),  # ৢ ৣ
    (0x09E6, 0x09EF, CodepointClass.DIGIT),                 # ০ .. ৯
    (0x09F0, 0x09F1, CodepointClass.CONSONANT),             # ৰ ৱ
    (0x09F2, 0x09FB, CodepointClass.OTHER),                 # currency marks, ৺, ৻
    (0x09FC, 0x09FD, CodepointClass.OTHER),                 # vedic anusvara letter, abbreviation sign
    (0x09FE, 0x09FE, CodepointClass.MODIFIER_SIGN),         # sandhi mark
)

# Pairwise compositions applied after NFC.  The vowel pairs are also
# NFC compositions (listed for table completeness); the nukta pairs are
# NFC exclusions and only this pass recombines them.
_BENGALI_COMPOSITIONS: tuple[tuple[int, int, int], ...] = (
    (0x09C7, 0x09BE, 0x09CB),  # ে + া → ো
    (0x09C7, 0x09D7, 0x09CC),  # ে + ৗ → ৌ
    (0x09A1, 0x09BC, 0x09DC),  # ড + nukta → ড়
    (0x09A2, 0x09BC, 0x09DD),  # ঢ + nukta → ঢ়
    (0x09AF, 0x09BC, 0x09DF),  # য + nukta → য়
)


@dataclass(frozen=True, slots=True)
class BasicChar:
    """One constituent character of an output stream."""

    codepoint: int
    category: CodepointClass

    @property
    def char(self) -> str:
        return chr(self.codepoint)


@dataclass(frozen=True)
class OutputStream:
    """Flattened constituent-character view of a text."""

    chars: tuple[BasicChar, ...]

    @property
    def length(self) -> int:
        return len(self.chars)

    @property
    def text(self) -> str:
        return "".join(c.char for c in self.chars)

    def __len__(self) -> int:
        return len(self.chars)

    def __iter__(self) -> Iterator[BasicChar]:
        return iter(self.chars)


@dataclass(frozen=True, slots=True)
class GraphemeCluster:
    """One visual unit and the number of constituents it flattens to."""

    text: str
    constituent_count: int


@dataclass(frozen=True)
class CharTable:
    """Codepoint classification plus pairwise composition rules.

    ``classes`` maps codepoints to explicit classes; anything unlisted is
    classified by fallback (zero-width controls, whitespace via
    ``str.isspace``, then Other).  ``compositions`` maps an adjacent
    codepoint pair to the codepoint it canonically composes to.
    """

    classes: Mapping[int, CodepointClass]
    compositions: Mapping[tuple[int, int], int]

    def classify(self, codepoint: int) -> CodepointClass:
        if not 0 <= codepoint <= 0x10FFFF:
            raise ValueError(f"codepoint out of range: {codepoint!r}")
        cls = self.classes.get(codepoint)
        if cls is not None:
            return cls
        if codepoint in ZERO_WIDTH_CONTROLS:
            return CodepointClass.ZERO_WIDTH_CONTROL
        if chr(codepoint).isspace():
            return CodepointClass.WHITESPACE
        return CodepointClass.OTHER

    def compose(self, text: str) -> str:
        """Apply composition pairs left to right until none fire."""
        if not self.compositions:
            return text
        out: list[str] = []
        for ch in text:
            out.append(ch)
            while len(out) >= 2:
                merged = self.compositions.get((ord(out[-2]), ord(out[-1])))
                if merged is None:
                    break
                out[-2:] = [chr(merged)]
        return "".join(out)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "CharTable":
        """Parse table records: ``<hex> <ClassTag> [<hexA> <hexB>]``.

        ``#`` starts a comment; blank lines are skipped.  A record with a
        composition pair declares that A followed by B composes to the
        record's codepoint.
        """
        tags = {c.value: c for c in CodepointClass}
        classes: dict[int, CodepointClass] = {}
        compositions: dict[tuple[int, int], int] = {}
        for lineno, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) not in (2, 4):
                raise ParseError(
                    f"expected 2 or 4 fields, got {len(tokens)}", line=lineno)
            try:
                cp = int(tokens[0], 16)
            except ValueError:
                raise ParseError(f"bad codepoint {tokens[0]!r}", line=lineno) from None
            if tokens[1] not in tags:
                raise ParseError(f"unknown class tag {tokens[1]!r}", line=lineno)
            if cp in classes:
                raise ParseError(f"duplicate record for U+{cp:04X}", line=lineno)
            classes[cp] = tags[tokens[1]]
            if len(tokens) == 4:
                try:
                    first, second = int(tokens[2], 16), int(tokens[3], 16)
                except ValueError:
                    raise ParseError("bad composition pair", line=lineno) from None
                compositions[(first, second)] = cp
        return cls(classes=classes, compositions=compositions)

    def to_lines(self) -> list[str]:
        """Serialize back to the table file format, sorted by codepoint."""
        by_target = {target: pair for pair, target in self.compositions.items()}
        out = []
        for cp in sorted(self.classes):
            line = f"{cp:04X} {self.classes[cp].value}"
            if cp in by_target:
                first, second = by_target[cp]
                line += f" {first:04X} {second:04X}"
            out.append(line)
        return out


def _builtin_table() -> CharTable:
    classes: dict[int, CodepointClass] = {}
    for start, end, cls in _BENGALI_RANGES:
        for cp in range(start, end + 1):
            classes[cp] = cls
    # Unassigned holes in the block stay explicit so table dumps cover
    # the whole range a record file would.
    for cp in range(0x0980, 0x0A00):
        classes.setdefault(cp, CodepointClass.OTHER)
    compositions = {(a, b): t for a, b, t in _BENGALI_COMPOSITIONS}
    return CharTable(classes=classes, compositions=compositions)


BENGALI_TABLE = _builtin_table()


def load_table_file(path: str) -> CharTable:
    """Load a classification table from a UTF-8 record file."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise EncodingError(f"{path}: {err}") from err
    return CharTable.from_lines(text.splitlines())


def classify_codepoint(codepoint: int, table: CharTable = BENGALI_TABLE) -> CodepointClass:
    """Classify one codepoint.  Total: every codepoint gets some class."""
    return table.classify(codepoint)


def normalize(text: str, table: CharTable = BENGALI_TABLE) -> str:
    """Canonicalize ``text``: NFC, then the table's composition pairs.

    Raises :class:`InvalidEncodingError` if the string contains lone
    surrogates (Python admits them; no valid text does).
    """
    for idx, ch in enumerate(text):
        if 0xD800 <= ord(ch) <= 0xDFFF:
            raise InvalidEncodingError(
                f"lone surrogate U+{ord(ch):04X} at index {idx}")
    return table.compose(unicodedata.normalize("NFC", text))


def to_output_stream(text: str, table: CharTable = BENGALI_TABLE) -> OutputStream:
    """Flatten ``text`` to its constituent basic characters.

    Normalizes first, drops zero-width controls, and keeps everything
    else one codepoint per character: conjuncts and composite glyph
    sequences are fully disjoined, so কান্ড yields the five characters
    ক া ন ্ ড and ক্ষ yields ক ্ ষ.  Whitespace is retained.
    """
    out: list[BasicChar] = []
    for ch in normalize(text, table):
        cls = table.classify(ord(ch))
        if cls is CodepointClass.ZERO_WIDTH_CONTROL:
            continue
        out.append(BasicChar(ord(ch), cls))
    return OutputStream(tuple(out))


def recompose(stream: OutputStream) -> str:
    """Inverse of :func:`to_output_stream` up to normalization."""
    return stream.text


_ATTACHING = (
    CodepointClass.DEPENDENT_VOWEL_SIGN,
    CodepointClass.MODIFIER_SIGN,
    CodepointClass.VIRAMA,
)
_SINGLETON = (CodepointClass.WHITESPACE, CodepointClass.DIGIT)


def segment_graphemes(text: str, table: CharTable = BENGALI_TABLE) -> list[GraphemeCluster]:
    """Split ``text`` into visual grapheme clusters.

    A cluster grows while dependent vowel signs, modifier signs, or the
    virama attach to it, and continues through a consonant+virama tail
    (the conjunct case).  Whitespace and digits are always singleton
    clusters.  Zero-width controls attach to the current cluster but
    never count as constituents.  Concatenating the cluster texts gives
    back the normalized input, and constituent counts sum to the output
    stream length.
    """
    text = normalize(text, table)
    clusters: list[GraphemeCluster] = []
    cur: list[str] = []
    eff: list[CodepointClass] = []  # classes of the non-ZWC codepoints in cur
    pending = ""  # leading zero-width controls before the first cluster

    def flush() -> None:
        if cur:
            clusters.append(GraphemeCluster("".join(cur), len(eff)))

    for ch in text:
        cls = table.classify(ord(ch))
        if cls is CodepointClass.ZERO_WIDTH_CONTROL:
            if cur:
                cur.append(ch)
            else:
                pending += ch
            continue
        attach = False
        if eff and eff[-1] not in _SINGLETON:
            if cls in _ATTACHING:
                attach = True
            elif (len(eff) >= 2
                  and eff[-1] is CodepointClass.VIRAMA
                  and eff[-2] is CodepointClass.CONSONANT
                  and cls not in _SINGLETON):
                attach = True
        if not attach:
            flush()
            cur = list(pending)
            eff = []
            pending = ""
        cur.append(ch)
        eff.append(cls)
    flush()
    if pending and not clusters:
        # Degenerate all-control text: keep it, zero constituents.
        clusters.append(GraphemeCluster(pending, 0))
    return clusters
