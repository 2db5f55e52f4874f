"""Surname lexicon, gender variants, corpus mining and the abbreviation list."""
from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .normalize import HomoglyphTable, default_homoglyphs, letter_script, repair_homoglyphs

log = logging.getLogger(__name__)

__all__ = [
    "NameLexicon",
    "AbbreviationList",
    "Lexicons",
    "derive_gender_variants",
    "mine_candidate_names",
    "is_known_surname",
    "is_abbreviation",
]

# Longest suffix wins, so "-ская" is never read as "-ая".
_GENDER_RULES = [
    ("ский", "ская"),
    ("цкий", "цкая"),
    ("ов", "ова"),
    ("ев", "ева"),
    ("ин", "ина"),
    ("ый", "ая"),
]
_SUFFIX_MAP = {}
for _male, _female in _GENDER_RULES:
    _SUFFIX_MAP[_male] = _female
    _SUFFIX_MAP[_female] = _male
_SUFFIXES = sorted(_SUFFIX_MAP, key=len, reverse=True)

PROVENANCES = ("seed", "derived", "mined")

_TRAILING = ",;:"


def _is_surname_shape(word: str) -> bool:
    return bool(word) and word[0].isupper() and letter_script(word[0]) == "Cyrillic"


def derive_gender_variants(surname: str) -> set[str]:
    """The surname plus its opposite-gender form, when a suffix rule fires.

    >>> sorted(derive_gender_variants("Петров"))
    ['Петров', 'Петрова']
    """
    out = {surname}
    for suffix in _SUFFIXES:
        # require a non-empty stem
        if surname.endswith(suffix) and len(surname) > len(suffix):
            out.add(surname[: -len(suffix)] + _SUFFIX_MAP[suffix])
            break
    return out


class NameLexicon:
    """Capitalized Cyrillic surnames with a provenance tag per entry.

    Adding a name also adds its gender counterpart, so the lexicon stays
    closed under :func:`derive_gender_variants`.
    """

    def __init__(self, names: Iterable[str] = (), provenance: str = "seed"):
        self._entries: dict[str, str] = {}
        for name in names:
            self.add(name, provenance)

    def add(self, name: str, provenance: str = "seed") -> bool:
        """Add ``name`` and its variants; returns True if anything was new."""
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        if not _is_surname_shape(name):
            raise ValueError(f"not a capitalized Cyrillic surname: {name!r}")
        added = False
        for variant in sorted(derive_gender_variants(name)):
            if variant in self._entries:
                continue
            self._entries[variant] = provenance if variant == name else "derived"
            added = True
        return added

    def __contains__(self, name) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def provenance(self, name: str) -> str:
        return self._entries[name]

    def items(self):
        return self._entries.items()

    def copy(self) -> "NameLexicon":
        new = NameLexicon()
        new._entries = dict(self._entries)
        return new

    @classmethod
    def load(cls, path) -> "NameLexicon":
        """One surname per line; an optional second TAB column is the provenance."""
        lex = cls()
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, prov = line.partition("\t")
            lex._load_entry(name.strip(), prov.strip() or "seed")
        return lex

    def _load_entry(self, name, prov):
        # keep stored provenance; only fill in missing variants
        if name not in self._entries:
            if not _is_surname_shape(name):
                raise ValueError(f"not a capitalized Cyrillic surname: {name!r}")
            self._entries[name] = prov
        for variant in derive_gender_variants(name):
            self._entries.setdefault(variant, "derived")

    def save(self, path):
        lines = [f"{name}\t{prov}" for name, prov in sorted(self._entries.items())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def default(cls) -> "NameLexicon":
        text = resources.files("cyrcite.data").joinpath("seed_surnames.txt").read_text(encoding="utf-8")
        return cls(line.strip() for line in text.splitlines() if line.strip())


class AbbreviationList:
    def __init__(self, entries: Iterable[str] = ()):
        normed = set()
        for e in entries:
            e = e.strip()
            if not e.endswith("."):
                raise ValueError(f"abbreviation must end with '.': {e!r}")
            normed.add(e.casefold())
        self._entries = frozenset(normed)

    def __contains__(self, item) -> bool:
        return item.casefold() in self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries))

    @classmethod
    def load(cls, path) -> "AbbreviationList":
        return cls(_data_lines(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def default(cls) -> "AbbreviationList":
        text = resources.files("cyrcite.data").joinpath("abbreviations.txt").read_text(encoding="utf-8")
        return cls(_data_lines(text))


def _data_lines(text):
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


@dataclass
class Lexicons:
    """Everything the feature extractor looks up, bundled."""

    names: NameLexicon = field(default_factory=NameLexicon.default)
    abbreviations: AbbreviationList = field(default_factory=AbbreviationList.default)
    homoglyphs: HomoglyphTable = field(default_factory=default_homoglyphs)


def _strip_token(token_text: str) -> str:
    return token_text.rstrip(_TRAILING)


def is_known_surname(token_text: str, lexicon: NameLexicon, table: Optional[HomoglyphTable] = None) -> bool:
    word = _strip_token(token_text)
    if not word:
        return False
    word, _ = repair_homoglyphs(word, table)
    return word in lexicon


def is_abbreviation(token_text: str, abbreviations: AbbreviationList) -> bool:
    # GOST dashes glue onto the next token: "-Т." / "–С."
    word = token_text.lstrip("-–—").rstrip(_TRAILING)
    return word.endswith(".") and word in abbreviations


# Surname followed by 1-2 dotted initials, e.g. "Гордиенко Э.А." / "Шейко С. Б."
_UNIT = re.compile(
    r"(?<![\w-])(?P<name>[А-ЯЁ][а-яё]+(?:-[А-ЯЁ][а-яё]+)?)"
    r"\s*,?\s*(?P<init>[А-ЯЁ]\.(?:\s?[А-ЯЁ]\.)?)"
)
_GAP = re.compile(r"[\s,]*")


def _author_units(line: str, table: HomoglyphTable):
    repaired = " ".join(repair_homoglyphs(tok, table)[0] for tok in line.split())
    return [(m.group("name"), m.start(), m.end()) for m in _UNIT.finditer(repaired)], repaired


def mine_candidate_names(
    corpus: Iterable[str],
    lexicon: NameLexicon,
    min_count: int = 1,
    table: Optional[HomoglyphTable] = None,
    max_rounds: int = 100,
) -> NameLexicon:
    """Grow ``lexicon`` with unknown surnames sitting next to known ones.

    A candidate is a capitalized Cyrillic word with initials that is
    adjacent (separated only by commas/space) to a known surname with
    initials.  Candidates and their gender variants are added, then the
    corpus is scanned again until nothing new turns up.  The input lexicon
    is not modified.
    """
    if not len(lexicon):
        raise ValueError("mining needs a non-empty seed lexicon")
    if table is None:
        table = default_homoglyphs()
    lines = list(corpus)
    parsed = [_author_units(line, table) for line in lines]
    out = lexicon.copy()
    for round_no in range(max_rounds):
        counts: Counter[str] = Counter()
        for units, text in parsed:
            for (n1, _, e1), (n2, s2, _) in zip(units, units[1:]):
                if not _GAP.fullmatch(text[e1:s2]):
                    continue
                if n1 in out and n2 not in out:
                    counts[n2] += 1
                elif n2 in out and n1 not in out:
                    counts[n1] += 1
        new = [name for name, c in sorted(counts.items()) if c >= min_count]
        if not new:
            break
        for name in new:
            out.add(name, "mined")
        log.debug("mining round %d: %d new names", round_no + 1, len(new))
    return out
