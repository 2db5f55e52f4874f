"""Token features and row features for reference lines.

Token features look at one token in isolation; row features are computed
afterwards from the token features of the whole line.
"""
from __future__ import annotations

import datetime
import re
from typing import Optional, Sequence

from .lexicons import Lexicons, is_abbreviation, is_known_surname
from .normalize import ScriptClass, Token, classify_script, repair_homoglyphs, tokenize

__all__ = [
    "TOKEN_FEATURES",
    "ROW_FEATURES",
    "FEATURE_ORDER",
    "token_features",
    "row_features",
    "featurize",
    "featurize_line",
    "dump_features",
    "parse_feature_dump",
    "default_year_range",
]

TOKEN_FEATURES = (
    "broad_type",
    "is_known_surname",
    "is_capitalized",
    "is_allcaps_dotted",
    "is_publication_year",
    "is_four_digits",
    "is_mimeo_marker",
    "is_double_slash",
    "is_single_slash",
    "is_abbreviation",
)
ROW_FEATURES = (
    "before_single_slash",
    "after_single_slash",
    "before_double_slash",
    "after_double_slash",
    "likely_author_zone",
    "likely_title_zone",
)
FEATURE_ORDER = TOKEN_FEATURES + ROW_FEATURES

FeatureVector = dict

_YEAR = re.compile(r"[-–—(\[]?(\d{4})[.,;:)\]]*")
_FOUR_DIGITS = re.compile(r"(?<!\d)\d{4}(?!\d)")
_MIMEO = "М.:"


def default_year_range() -> tuple[int, int]:
    return 1500, datetime.date.today().year + 1


def _is_initials(text: str) -> bool:
    # "Э.А.", "S.", "ГОСТ" -- uppercase letters, each optionally dotted
    core = text.rstrip(",;:")
    if not core:
        return False
    prev_letter = False
    for ch in core:
        if ch.isalpha():
            if not ch.isupper():
                return False
            prev_letter = True
        elif ch == "." and prev_letter:
            prev_letter = False
        else:
            return False
    return True


def _is_capitalized(text: str) -> bool:
    core = text.lstrip("\"'«„“([")
    return bool(core) and core[0].isupper() and any(ch.islower() for ch in core)


def publication_year(text: str, year_range: tuple[int, int]) -> Optional[str]:
    m = _YEAR.fullmatch(text)
    if m and year_range[0] <= int(m.group(1)) <= year_range[1]:
        return m.group(1)
    return None


def token_features(
    token: Token, lexicons: Lexicons, year_range: Optional[tuple[int, int]] = None
) -> FeatureVector:
    if year_range is None:
        year_range = default_year_range()
    text = token.text
    table = lexicons.homoglyphs
    repaired, _ = repair_homoglyphs(text, table)
    broad = classify_script(repaired, table)
    no_double = text.replace("//", "")
    return {
        "broad_type": broad,
        "is_known_surname": is_known_surname(text, lexicons.names, table),
        "is_capitalized": _is_capitalized(repaired),
        "is_allcaps_dotted": _is_initials(repaired),
        "is_publication_year": publication_year(text, year_range) is not None,
        "is_four_digits": bool(_FOUR_DIGITS.search(text)),
        "is_mimeo_marker": table.as_cyrillic(text.lstrip("-–—")) == _MIMEO,
        "is_double_slash": "//" in text and broad is not ScriptClass.URL,
        "is_single_slash": "/" in no_double and broad is not ScriptClass.URL,
        "is_abbreviation": is_abbreviation(repaired, lexicons.abbreviations),
    }


def _title_end(feats: Sequence[FeatureVector], texts: Sequence[str], start: int) -> int:
    """Exclusive end of the title zone beginning at ``start``."""
    n = len(feats)
    for i in range(start, n):
        if feats[i]["is_double_slash"]:
            return i
        if texts[i].rstrip("\"'»”)]").endswith(".") and not feats[i]["is_abbreviation"]:
            return i + 1
    return n


def row_features(row: Sequence[tuple[Token, FeatureVector]]) -> list[FeatureVector]:
    """Complete each token's vector with the line-level flags."""
    feats = [f for _, f in row]
    texts = [t.text for t, _ in row]
    n = len(feats)
    first_double = next((i for i, f in enumerate(feats) if f["is_double_slash"]), None)
    first_single = next((i for i, f in enumerate(feats) if f["is_single_slash"]), None)

    # author zone: maximal prefix of (surname, initials+) groups
    author_end = 0
    i = 0
    while i + 1 < n:
        f = feats[i]
        surname = (f["is_known_surname"] or f["is_capitalized"]) and not f["is_allcaps_dotted"]
        if not (surname and feats[i + 1]["is_allcaps_dotted"]):
            break
        j = i + 2
        while j < n and feats[j]["is_allcaps_dotted"] and not feats[j]["is_abbreviation"]:
            j += 1
        author_end = i = j

    title_end = _title_end(feats, texts, author_end)

    out = []
    for k, f in enumerate(feats):
        g = dict(f)
        g["before_single_slash"] = first_single is not None and k < first_single
        g["after_single_slash"] = first_single is not None and k > first_single
        g["before_double_slash"] = first_double is not None and k < first_double
        g["after_double_slash"] = first_double is not None and k > first_double
        g["likely_author_zone"] = k < author_end
        g["likely_title_zone"] = author_end <= k < title_end
        out.append(g)
    return out


def featurize(
    tokens: Sequence[Token], lexicons: Lexicons, year_range: Optional[tuple[int, int]] = None
) -> list[FeatureVector]:
    return row_features([(t, token_features(t, lexicons, year_range)) for t in tokens])


def featurize_line(line: str, lexicons: Lexicons, year_range=None):
    tokens = tokenize(line)
    return tokens, featurize(tokens, lexicons, year_range)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def dump_features(
    rows: Sequence[tuple[Sequence[str], Sequence[FeatureVector]]],
    gold: Optional[Sequence[Sequence[str]]] = None,
) -> str:
    """TSV interchange: token, features in FEATURE_ORDER, optional gold label.

    Rows are separated by a blank line, as CRF toolkits expect.
    """
    blocks = []
    for r, (texts, feats) in enumerate(rows):
        lines = []
        for k, (text, f) in enumerate(zip(texts, feats)):
            cols = [text] + [_fmt(f[name]) for name in FEATURE_ORDER]
            if gold is not None:
                cols.append(gold[r][k])
            lines.append("\t".join(cols))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def parse_feature_dump(text: str, with_gold: bool = False):
    """Read :func:`dump_features` output back into (texts, feats[, labels]) rows."""
    rows = []
    cur_t, cur_f, cur_g = [], [], []

    def flush():
        if cur_t:
            rows.append((list(cur_t), list(cur_f), list(cur_g)) if with_gold else (list(cur_t), list(cur_f)))
            cur_t.clear(), cur_f.clear(), cur_g.clear()

    width = 1 + len(FEATURE_ORDER) + (1 if with_gold else 0)
    for line in text.split("\n"):
        if not line.strip():
            flush()
            continue
        cols = line.split("\t")
        if len(cols) != width:
            raise ValueError(f"expected {width} columns, got {len(cols)}")
        f = {}
        for name, val in zip(FEATURE_ORDER, cols[1:]):
            f[name] = ScriptClass(val) if name == "broad_type" else val == "1"
        cur_t.append(cols[0])
        cur_f.append(f)
        if with_gold:
            cur_g.append(cols[-1])
    flush()
    return rows
