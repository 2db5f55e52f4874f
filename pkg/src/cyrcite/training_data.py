"""Annotation fragments <-> token/label columns.

Annotators mark a reference line up with ``<a>`` (author), ``<t>`` (title)
and ``<y>`` (year) inside an ``<r>`` root::

    <r><a>Гордиенко Э.А.</a> <t>Варлаам ... века.</t> – М.; СПб., <y>2010.</y></r>

Tokens inside a field get ``B-``/``I-`` labels, everything else ``O``.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .normalize import tokenize

__all__ = [
    "LABELS",
    "FIELDS",
    "AnnotationError",
    "LabeledSequence",
    "parse_annotation",
    "render_columns",
    "render_corpus",
    "parse_columns",
    "reconstruct",
    "strip_tags",
    "collapse_ws",
    "load_annotations",
    "is_valid_labeling",
]

FIELDS = ("A", "T", "Y")
LABELS = ("B-A", "I-A", "B-T", "I-T", "B-Y", "O")
_TAG_FIELD = {"a": "A", "t": "T", "y": "Y"}


class AnnotationError(ValueError):
    """Raised for malformed, overlapping or corrupted annotation fragments."""


def field_of(label: str) -> Optional[str]:
    return None if label == "O" else label[2:]


def is_valid_labeling(labels: Sequence[str]) -> bool:
    prev = "O"
    for lab in labels:
        if lab not in LABELS:
            return False
        if lab.startswith("I-") and field_of(prev) != lab[2:]:
            return False
        prev = lab
    return True


@dataclass(frozen=True)
class LabeledSequence:
    tokens: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.tokens) != len(self.labels):
            raise ValueError("tokens and labels differ in length")
        for tok in self.tokens:
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"invalid token {tok!r}")
        if not is_valid_labeling(self.labels):
            raise ValueError(f"label sequence violates the B-/I- scheme: {self.labels}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "LabeledSequence":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def pairs(self) -> list[tuple[str, str]]:
        return list(zip(self.tokens, self.labels))

    def __len__(self):
        return len(self.tokens)


_WS = re.compile(r"\s+")


def collapse_ws(text: str) -> str:
    return _WS.sub(" ", text).strip()


def _parse_fragment(fragment: str) -> ET.Element:
    try:
        root = ET.fromstring(fragment)
    except ET.ParseError as exc:
        raise AnnotationError(f"malformed annotation XML: {exc}") from None
    if root.tag != "r":
        raise AnnotationError(f"root element must be <r>, got <{root.tag}>")
    return root


def _segments(root: ET.Element) -> list[tuple[str, Optional[str], int]]:
    """(text, field, element ordinal) pieces in document order."""
    segs = [(root.text or "", None, -1)]
    for k, child in enumerate(root):
        fld = _TAG_FIELD.get(child.tag)
        if fld is None:
            raise AnnotationError(f"unknown element <{child.tag}>")
        if len(child):
            raise AnnotationError(f"nested element inside <{child.tag}>")
        if child.attrib:
            raise AnnotationError(f"<{child.tag}> takes no attributes")
        segs.append((child.text or "", fld, k))
        segs.append((child.tail or "", None, -1))
    return segs


def strip_tags(fragment: str) -> str:
    """The raw reference text under the markup."""
    return "".join(text for text, _, _ in _segments(_parse_fragment(fragment)))


def parse_annotation(fragment: str, original: Optional[str] = None) -> LabeledSequence:
    """Turn one ``<r>`` fragment into a labeled token sequence.

    If ``original`` is given, the tag-stripped fragment must equal it after
    whitespace collapsing, otherwise :class:`AnnotationError` is raised.
    """
    segs = _segments(_parse_fragment(fragment))
    text = "".join(s for s, _, _ in segs)
    if original is not None and collapse_ws(original) != collapse_ws(text):
        raise AnnotationError("tag-stripped fragment does not match the original line")

    # character -> (field, element ordinal)
    owner: list[tuple[Optional[str], int]] = []
    for seg_text, fld, k in segs:
        owner.extend([(fld, k)] * len(seg_text))

    tokens, labels = [], []
    prev_elem = None
    for tok in tokenize(text):
        owners = set(owner[tok.span[0]:tok.span[1]])
        if len(owners) != 1:
            raise AnnotationError(f"field boundary inside token {tok.text!r}")
        fld, elem = owners.pop()
        if fld is None:
            labels.append("O")
        else:
            labels.append(("I-" if elem == prev_elem else "B-") + fld)
        prev_elem = elem if fld is not None else None
        tokens.append(tok.text)
    if any(lab == "I-Y" for lab in labels):
        raise AnnotationError("year field must be a single token")
    return LabeledSequence(tuple(tokens), tuple(labels))


def render_columns(seq: LabeledSequence) -> str:
    return "\n".join(f"{tok}\t{lab}" for tok, lab in seq.pairs())


def render_corpus(seqs: Iterable[LabeledSequence]) -> str:
    return "\n\n".join(render_columns(s) for s in seqs)


def parse_columns(text: str) -> list[LabeledSequence]:
    """Inverse of :func:`render_corpus` (and of :func:`render_columns`)."""
    seqs, cur = [], []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            if cur:
                seqs.append(LabeledSequence.from_pairs(cur))
                cur = []
            continue
        cols = line.split("\t")
        if len(cols) < 2:
            raise ValueError(f"line {lineno}: expected token<TAB>label")
        cur.append((cols[0], cols[-1]))
    if cur:
        seqs.append(LabeledSequence.from_pairs(cur))
    return seqs


def reconstruct(seq: LabeledSequence) -> str:
    return " ".join(seq.tokens)


def load_annotations(path) -> list[LabeledSequence]:
    """One ``<r>...</r>`` fragment per line; blank and ``#`` lines skipped."""
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            out.append(parse_annotation(line))
        except AnnotationError as exc:
            raise AnnotationError(f"{path}:{lineno}: {exc}") from None
    return out
