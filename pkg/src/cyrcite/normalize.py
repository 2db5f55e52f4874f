"""Script classification, homoglyph repair and whitespace tokenization.

Reference strings in the corpus mix Cyrillic and Latin letters, sometimes
inside a single word because a Latin ``e`` was typed in place of the
Cyrillic ``е``.  Everything here is pure; tables are immutable once built.
"""
from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

__all__ = [
    "Token",
    "ScriptClass",
    "HomoglyphTable",
    "default_homoglyphs",
    "tokenize",
    "classify_script",
    "repair_homoglyphs",
    "find_cyrillic_span",
    "letter_script",
]

_WS_RUN = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    text: str
    index: int
    span: tuple[int, int]

    def __post_init__(self):
        if not self.text or any(ch.isspace() for ch in self.text):
            raise ValueError(f"invalid token text {self.text!r}")


class ScriptClass(str, enum.Enum):
    CYRILLIC = "Cyrillic"
    LATIN = "Latin"
    NUMERIC = "Numeric"
    ROMAN = "RomanNumeral"
    URL = "Url"
    SYMBOL = "Symbol"
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value


class HomoglyphTable:
    """Bidirectional Latin <-> Cyrillic lookalike mapping.

    The mapping is an involution: ``to_cyrillic`` and ``to_latin`` are
    inverse dictionaries over disjoint code point sets.
    """

    def __init__(self, pairs: Iterable[tuple[str, str]]):
        to_cyr: dict[str, str] = {}
        to_lat: dict[str, str] = {}
        for lat, cyr in pairs:
            if letter_script(lat) != "Latin" or letter_script(cyr) != "Cyrillic":
                raise ValueError(f"bad homoglyph pair {lat!r}/{cyr!r}")
            if lat in to_cyr or cyr in to_lat:
                raise ValueError(f"duplicate homoglyph entry {lat!r}/{cyr!r}")
            to_cyr[lat] = cyr
            to_lat[cyr] = lat
        self.to_cyrillic: Mapping[str, str] = to_cyr
        self.to_latin: Mapping[str, str] = to_lat

    def __len__(self):
        return len(self.to_cyrillic)

    def __contains__(self, ch: str) -> bool:
        return ch in self.to_cyrillic or ch in self.to_latin

    def flip(self, ch: str) -> str:
        return self.to_cyrillic.get(ch) or self.to_latin.get(ch) or ch

    def as_cyrillic(self, text: str) -> str:
        return "".join(self.to_cyrillic.get(ch, ch) for ch in text)

    def as_latin(self, text: str) -> str:
        return "".join(self.to_latin.get(ch, ch) for ch in text)

    @classmethod
    def load(cls, path) -> "HomoglyphTable":
        """Read the two-column hex code point file (``#`` starts a comment)."""
        text = Path(path).read_text(encoding="utf-8")
        return cls(_parse_pairs(text))

    def __eq__(self, other):
        return isinstance(other, HomoglyphTable) and dict(self.to_cyrillic) == dict(other.to_cyrillic)

    def __hash__(self):
        return hash(frozenset(self.to_cyrillic.items()))


def _parse_pairs(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        cols = line.split()
        if len(cols) != 2:
            raise ValueError(f"homoglyph table line {lineno}: expected 2 columns")
        yield chr(int(cols[0], 16)), chr(int(cols[1], 16))


@lru_cache(maxsize=1)
def default_homoglyphs() -> HomoglyphTable:
    text = resources.files("cyrcite.data").joinpath("homoglyphs.tsv").read_text(encoding="utf-8")
    return HomoglyphTable(_parse_pairs(text))


@lru_cache(maxsize=4096)
def letter_script(ch: str) -> Optional[str]:
    """'Latin', 'Cyrillic' or 'Other' for letters, None for non-letters."""
    if not ch.isalpha():
        return None
    name = unicodedata.name(ch, "")
    if name.startswith("LATIN"):
        return "Latin"
    if name.startswith("CYRILLIC"):
        return "Cyrillic"
    return "Other"


def tokenize(line: str) -> list[Token]:
    """Split at runs of whitespace; spans index into the original line."""
    return [Token(m.group(), i, m.span()) for i, m in enumerate(_WS_RUN.finditer(line))]


def repair_homoglyphs(token_text: str, table: Optional[HomoglyphTable] = None) -> tuple[str, bool]:
    """Flip lookalike letters so the token is written in a single script.

    Letters without a lookalike anchor the script.  When anchors from both
    scripts (or from a third script) are present no flip assignment can
    help and the token comes back unchanged with ``resolved=False``.  A
    token made only of ambiguous letters is written in Cyrillic.
    """
    if table is None:
        table = default_homoglyphs()
    latin = cyrillic = 0
    for ch in token_text:
        script = letter_script(ch)
        if script is None or ch in table:
            continue
        if script == "Latin":
            latin += 1
        elif script == "Cyrillic":
            cyrillic += 1
        else:
            return token_text, False
    if latin and cyrillic:
        return token_text, False
    if latin:
        return table.as_latin(token_text), True
    return table.as_cyrillic(token_text), True


# Roman numerals, optionally as a range: "XII-XVI", "IV–V"
_ROMAN_ONE = r"M{0,4}(?:CM|CD|D?C{0,3})(?:XC|XL|L?X{0,3})(?:IX|IV|V?I{0,3})"
_ROMAN = re.compile(rf"(?=[MDCLXVI])({_ROMAN_ONE})(?:[-–—](?=[MDCLXVI])({_ROMAN_ONE}))?")
_URL = re.compile(r"^(?:[a-z][a-z0-9+.-]*://[^\s/]+|www\.[^\s/]+\.[^\s/]+|doi:\S+)", re.IGNORECASE)
_EDGE_PUNCT = "\"'«»“”„‘’()[]{}<>.,;:!?…-–—/\\"


def _is_roman(core: str) -> bool:
    m = _ROMAN.fullmatch(core)
    return bool(m and m.group(0))


def classify_script(token_text: str, table: Optional[HomoglyphTable] = None) -> ScriptClass:
    """Broad type of a token; the caller decides whether to repair it first."""
    if not token_text:
        raise ValueError("classify_script needs a non-empty token")
    if table is None:
        table = default_homoglyphs()
    core = token_text.strip(_EDGE_PUNCT)
    if _URL.match(core) or _URL.match(token_text):
        return ScriptClass.URL
    has_digit = any(ch.isdigit() for ch in token_text)
    scripts = {letter_script(ch) for ch in token_text} - {None}
    if not scripts:
        return ScriptClass.NUMERIC if has_digit else ScriptClass.SYMBOL
    if scripts == {"Latin"} and _is_roman(core):
        return ScriptClass.ROMAN
    # "ХХ" typed with Cyrillic lookalikes still reads as a numeral; single
    # letters are left alone because "С." is the page abbreviation.
    letters = [ch for ch in core if ch.isalpha()]
    if (
        len(letters) >= 2
        and all(ch in table.to_latin for ch in letters)
        and _is_roman(table.as_latin(core))
    ):
        return ScriptClass.ROMAN
    if scripts == {"Cyrillic"}:
        return ScriptClass.CYRILLIC
    if scripts == {"Latin"}:
        return ScriptClass.LATIN
    return ScriptClass.UNDETERMINED


_SPAN_CLASSES = {ScriptClass.CYRILLIC, ScriptClass.NUMERIC, ScriptClass.SYMBOL, ScriptClass.ROMAN}


def find_cyrillic_span(
    tokens: Sequence[Token], table: Optional[HomoglyphTable] = None
) -> Optional[tuple[int, int]]:
    """Longest contiguous half-open token interval that reads as Cyrillic.

    Qualifying tokens are Cyrillic, numeric or symbolic (roman numerals are
    allowed inside a run but never at its edges); the run must hold at
    least one Cyrillic token.  Ties go to the earliest run.
    """
    if table is None:
        table = default_homoglyphs()
    classes = [classify_script(repair_homoglyphs(t.text, table)[0], table) for t in tokens]
    best: Optional[tuple[int, int]] = None
    i, n = 0, len(classes)
    while i < n:
        if classes[i] not in _SPAN_CLASSES:
            i += 1
            continue
        j = i
        while j < n and classes[j] in _SPAN_CLASSES:
            j += 1
        lo, hi = i, j
        while lo < hi and classes[lo] is ScriptClass.ROMAN:
            lo += 1
        while hi > lo and classes[hi - 1] is ScriptClass.ROMAN:
            hi -= 1
        if any(c is ScriptClass.CYRILLIC for c in classes[lo:hi]):
            if best is None or hi - lo > best[1] - best[0]:
                best = (lo, hi)
        i = j
    return best
