"""Structured PDF text dumps: loading, linearization, reference segmentation.

Input is the page/item JSON produced by PDF.js-style converters::

    [{"page": 1, "textContent": {"items": [{"str": "...", "transform": [...], ...}]}}]

A ``{"pages": [...]}`` wrapper is accepted too.

Separator contract (offsets depend on it): between consecutive items a
``"\\n"`` is inserted when the page changes or the vertical position
(``transform[5]``) moves by more than the line tolerance; otherwise a
single ``" "`` is inserted unless the left item ends or the right item
starts with whitespace.  Offsets count code points.
"""
from __future__ import annotations

import bisect
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .config import DEFAULT_HEADINGS
from .normalize import repair_homoglyphs

__all__ = [
    "PageItem",
    "DocumentText",
    "DocumentError",
    "BrokenStructure",
    "NoTextLayer",
    "NoReferenceSection",
    "load_document",
    "parse_document",
    "linearize",
    "segment_references",
    "RefEntry",
]


class DocumentError(Exception):
    code = "DocumentError"


class BrokenStructure(DocumentError):
    code = "BrokenStructure"


class NoTextLayer(DocumentError):
    code = "NoTextLayer"


class NoReferenceSection(DocumentError):
    code = "NoReferenceSection"


@dataclass(frozen=True)
class PageItem:
    text: str  # the "str" attribute
    page: int
    dir: Optional[str] = None
    width: Optional[float] = None
    height: Optional[float] = None
    transform: Optional[tuple[float, ...]] = None
    fontName: Optional[str] = None

    @property
    def y(self) -> Optional[float]:
        return self.transform[5] if self.transform else None


def _number(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise BrokenStructure(f"{what} must be a number")
    return float(v)


def _item(raw, page: int) -> PageItem:
    if not isinstance(raw, dict) or not isinstance(raw.get("str"), str):
        raise BrokenStructure(f"page {page}: item without a string 'str'")
    transform = raw.get("transform")
    if transform is not None:
        if not isinstance(transform, list) or len(transform) != 6:
            raise BrokenStructure(f"page {page}: transform must have 6 numbers")
        transform = tuple(_number(v, "transform entry") for v in transform)
    width = raw.get("width")
    height = raw.get("height")
    return PageItem(
        text=raw["str"],
        page=page,
        dir=raw.get("dir"),
        width=None if width is None else _number(width, "width"),
        height=None if height is None else _number(height, "height"),
        transform=transform,
        fontName=raw.get("fontName"),
    )


def parse_document(data) -> list[PageItem]:
    """Validate decoded JSON and return items in reading order."""
    if isinstance(data, dict) and "pages" in data:
        data = data["pages"]
    if not isinstance(data, list):
        raise BrokenStructure("top level must be a list of pages")
    pages = []
    for k, page in enumerate(data):
        if not isinstance(page, dict):
            raise BrokenStructure(f"page entry {k} is not an object")
        num = page.get("page", k + 1)
        if isinstance(num, bool) or not isinstance(num, int) or num < 1:
            raise BrokenStructure(f"page entry {k}: bad page number {num!r}")
        content = page.get("textContent")
        if not isinstance(content, dict) or not isinstance(content.get("items"), list):
            raise BrokenStructure(f"page {num}: missing textContent.items")
        pages.append((num, [_item(it, num) for it in content["items"]]))
    pages.sort(key=lambda p: p[0])
    items = [it for _, its in pages for it in its]
    if not any(it.text.strip() for it in items):
        raise NoTextLayer("document has no text layer")
    return items


def load_document(path) -> list[PageItem]:
    try:
        raw = Path(path).read_bytes()
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BrokenStructure(f"cannot decode {path}: {exc}") from None
    return parse_document(data)


@dataclass
class DocumentText:
    text: str
    items: list[PageItem]
    item_spans: list[tuple[int, int]]
    separators: list[tuple[int, str]] = field(default_factory=list)

    def locate(self, offset: int) -> tuple[int, int]:
        """(page, item index) owning ``offset``; separators belong to the next item."""
        if not 0 <= offset < len(self.text):
            raise IndexError(offset)
        i = bisect.bisect_right([e for _, e in self.item_spans], offset)
        return self.items[i].page, i

    def offset_map(self) -> list[tuple[int, int]]:
        """Total map from offset to (page, item index)."""
        out = []
        i = 0
        for off in range(len(self.text)):
            while self.item_spans[i][1] <= off:
                i += 1
            out.append((self.items[i].page, i))
        return out


def linearize(items: Sequence[PageItem], line_tolerance: float = 0.5) -> DocumentText:
    parts: list[str] = []
    spans: list[tuple[int, int]] = []
    seps: list[tuple[int, str]] = []
    pos = 0
    prev: Optional[PageItem] = None
    prev_text = ""
    for item in items:
        if prev is not None:
            sep = ""
            if item.page != prev.page:
                sep = "\n"
            elif item.y is not None and prev.y is not None and abs(item.y - prev.y) > line_tolerance:
                sep = "\n"
            elif prev_text and item.text and not prev_text[-1].isspace() and not item.text[0].isspace():
                sep = " "
            if sep:
                parts.append(sep)
                seps.append((pos, sep))
                pos += 1
        spans.append((pos, pos + len(item.text)))
        parts.append(item.text)
        pos += len(item.text)
        if item.text:
            prev_text = item.text
        prev = item
    return DocumentText("".join(parts), list(items), spans, seps)


@dataclass(frozen=True)
class RefEntry:
    num: int
    raw: str
    span: tuple[int, int]


_MARKER = re.compile(r"[ \t]*(?:\[(\d{1,3})\]|(\d{1,3})[.)])(?=\s|$)[ \t]*")


def _lines(text: str):
    pos = 0
    for line in text.split("\n"):
        yield pos, line
        pos += len(line) + 1


def _heading_key(line: str) -> str:
    words = [repair_homoglyphs(w)[0] for w in line.split()]
    key = " ".join(words).casefold()
    key = re.sub(r"^(?:\d+\.?|[ivx]+\.)\s*", "", key)
    return key.rstrip(" :.")


def _collect(text: str, lines, first: int) -> list[RefEntry]:
    """Numbered entries in ``lines[first:]`` with numbers 1, 2, 3, ..."""
    entries = []
    expected = 1
    cur_start = None
    cur_end = None
    for pos, line in lines[first:]:
        m = _MARKER.match(line)
        num = None
        if m:
            num = int(m.group(1) or m.group(2))
        if num == expected:
            if cur_start is not None:
                entries.append((cur_start, cur_end))
            cur_start = pos + m.end()
            cur_end = pos + len(line.rstrip())
            expected += 1
        elif cur_start is not None and line.strip():
            cur_end = pos + len(line.rstrip())
    if cur_start is not None:
        entries.append((cur_start, cur_end))
    out = []
    for k, (s, e) in enumerate(entries, 1):
        e = max(e, s)
        out.append(RefEntry(k, text[s:e], (s, e)))
    return out


def segment_references(
    doc: DocumentText, headings: Sequence[str] = DEFAULT_HEADINGS, min_fallback_entries: int = 2
) -> tuple[tuple[int, int], list[RefEntry]]:
    """Locate the reference section and split it into numbered entries.

    The last line equal to a known heading opens the section (an optional
    leading section number and trailing colon are tolerated).  Without a
    heading, the last run of at least ``min_fallback_entries`` consecutively
    numbered lines starting at 1 is used.
    """
    text = doc.text
    keys = {h.casefold() for h in headings}
    lines = list(_lines(text))
    heading_idx = None
    for k, (_, line) in enumerate(lines):
        if line.strip() and _heading_key(line) in keys:
            heading_idx = k
    if heading_idx is not None:
        start = lines[heading_idx][0]
        return (start, len(text)), _collect(text, lines, heading_idx + 1)

    for k in range(len(lines) - 1, -1, -1):
        m = _MARKER.match(lines[k][1])
        if m and int(m.group(1) or m.group(2)) == 1:
            entries = _collect(text, lines, k)
            if len(entries) >= min_fallback_entries:
                return (lines[k][0], len(text)), entries
    raise NoReferenceSection("no reference heading and no numbered reference block")
