"""Reference line -> (author, title, year) fields."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .features import default_year_range, featurize, publication_year
from .labeler import Model, predict
from .lexicons import Lexicons
from .normalize import ScriptClass, classify_script, find_cyrillic_span, repair_homoglyphs, tokenize
from .training_data import field_of

__all__ = ["ParsedReference", "assemble_fields", "parse_reference", "trim_title"]

_FIELD_PUNCT = " .,;:/–—-"


def trim_title(title: str) -> str:
    """Title with trailing field punctuation removed."""
    return title.rstrip(_FIELD_PUNCT)


@dataclass
class ParsedReference:
    num: int = 0
    raw: str = ""
    span: tuple[int, int] = (0, 0)
    author: str = ""
    title: str = ""
    year: str = ""
    unparsed_tail: str = ""
    labels: tuple[str, ...] = field(default=(), compare=False, repr=False)
    confidences: tuple[float, ...] = field(default=(), compare=False, repr=False)

    @property
    def clean_title(self) -> str:
        return trim_title(self.title)

    @property
    def linkable(self) -> bool:
        return bool(self.author and self.title and self.year)


def assemble_fields(
    tokens: Sequence[str], labels: Sequence[str], year_range: Optional[tuple[int, int]] = None
) -> tuple[str, str, str, str]:
    """Join labeled tokens into ``(author, title, year, unparsed_tail)``."""
    if year_range is None:
        year_range = default_year_range()
    authors: list[list[str]] = []
    title: list[str] = []
    years: list[str] = []
    last_title = -1
    for i, (tok, lab) in enumerate(zip(tokens, labels)):
        fld = field_of(lab)
        if fld == "A":
            if lab.startswith("B-") or not authors:
                authors.append([])
            authors[-1].append(tok)
        elif fld == "T":
            title.append(tok)
            last_title = i
        elif fld == "Y":
            years.append(tok)
    author = ", ".join(" ".join(run).rstrip(",;") for run in authors)
    year = ""
    for tok in years:
        y = publication_year(tok, year_range)
        if y:
            year = y
            break
    tail = [tok for i, (tok, lab) in enumerate(zip(tokens, labels)) if lab == "O" and i > last_title]
    return author, " ".join(title), year, " ".join(tail)


def _guard_double_slash(texts: Sequence[str], labels: list[str]) -> list[str]:
    # a title never includes or crosses a "//" token
    cut = next((i for i, t in enumerate(texts) if "//" in t and "://" not in t), None)
    if cut is None:
        return labels
    out = list(labels)
    for i in range(cut, len(out)):
        if field_of(out[i]) == "T":
            out[i] = "O"
    return out


def _cyrillic_dominant(tokens, table) -> bool:
    cyr = lat = 0
    for t in tokens:
        cls = classify_script(repair_homoglyphs(t.text, table)[0], table)
        if cls is ScriptClass.CYRILLIC:
            cyr += 1
        elif cls is ScriptClass.LATIN:
            lat += 1
    return cyr > 0 and cyr >= lat


def parse_reference(
    line: str,
    model: Model,
    lexicons: Lexicons,
    year_range: Optional[tuple[int, int]] = None,
    num: int = 0,
    span: Optional[tuple[int, int]] = None,
) -> ParsedReference:
    """tokenize -> repair -> features -> predict -> assemble.

    A line that mixes a transliterated/translated part with a Cyrillic part
    is parsed on its Cyrillic span when the line is Cyrillic-dominant; the
    tokens outside that span go to ``unparsed_tail``.
    """
    if year_range is None:
        year_range = default_year_range()
    if span is None:
        span = (0, len(line))
    ref = ParsedReference(num=num, raw=line, span=span)
    tokens = tokenize(line)
    if not tokens:
        return ref
    table = lexicons.homoglyphs
    lo, hi = 0, len(tokens)
    cyr = find_cyrillic_span(tokens, table)
    if cyr is not None and cyr != (0, len(tokens)) and _cyrillic_dominant(tokens, table):
        lo, hi = cyr
    part = tokens[lo:hi]
    feats = featurize(part, lexicons, year_range)
    texts = [t.text for t in part]
    pred = predict(model, texts, feats)
    labels = _guard_double_slash(texts, list(pred.labels))
    author, title, year, tail = assemble_fields(texts, labels, year_range)
    outside = [t.text for t in tokens[:lo]] + [t.text for t in tokens[hi:]]
    if outside:
        # "Translit [Кириллица] // ..." leaves the brackets on the field edges
        author = author.lstrip("[(")
        if title.count("[") < title.count("]"):
            title = title.rstrip("])")
    if outside:
        tail = " ".join([tail] + outside if tail else outside)
    ref.author, ref.title, ref.year, ref.unparsed_tail = author, title, year, tail
    ref.labels = tuple(labels)
    ref.confidences = pred.confidences
    return ref
