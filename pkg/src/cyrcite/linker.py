"""Reference linking against a local metadata collection.

References that cannot be linked get a temporary handle from the
unlinked-reference registry; once the cited paper shows up in the
collection the temporary handle is promoted to the real one.
"""
from __future__ import annotations

import datetime
import json
import logging
import re
import threading
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from .normalize import HomoglyphTable, default_homoglyphs
from .ref_parser import ParsedReference

log = logging.getLogger(__name__)

__all__ = [
    "MetadataRecord",
    "MetadataCollection",
    "RegistryEntry",
    "UnlinkedRegistry",
    "LinkRecord",
    "CitationStore",
    "LinkError",
    "normalize_text",
    "normalize_key",
    "surname_of",
    "link_reference",
    "register_unlinked",
    "promote",
]


class LinkError(Exception):
    pass


def _strip_punct(text: str) -> str:
    return "".join(" " if unicodedata.category(ch)[0] in "PS" else ch for ch in text)


def _skeleton(text: str, table: HomoglyphTable) -> str:
    # case-insensitive confusable skeleton: lookalikes collapse to Cyrillic
    to_cyr = table.to_cyrillic
    out = []
    for ch in text:
        for up in to_cyr.get(ch, ch).upper():
            out.append(to_cyr.get(up, up))
    return "".join(out).casefold()


def normalize_text(text: str, table: Optional[HomoglyphTable] = None) -> str:
    """Homoglyph-insensitive, case-folded, punctuation-free, single-spaced."""
    table = table or default_homoglyphs()
    out = _skeleton(_strip_punct(text), table).replace("ё", "е")
    return " ".join(out.split())


def surname_of(author: str, table: Optional[HomoglyphTable] = None) -> str:
    norm = normalize_text(author, table)
    return norm.split(" ", 1)[0] if norm else ""


def normalize_key(author: str, title: str, year: str, table: Optional[HomoglyphTable] = None) -> str:
    """Canonical ``title|year|first-author-surname`` key."""
    first = re.split(r"[,;]", author, maxsplit=1)[0] if author else ""
    return f"{normalize_text(title, table)}|{year.strip()}|{surname_of(first, table)}"


@dataclass(frozen=True)
class MetadataRecord:
    handle: str
    authors: tuple[str, ...]
    title: str
    year: str

    def __post_init__(self):
        if not self.handle:
            raise ValueError("metadata record needs a handle")
        object.__setattr__(self, "authors", tuple(self.authors))


class MetadataCollection:
    """Immutable set of records indexed by normalized title.

    File format: UTF-8 JSON lines, one object per record with keys
    ``handle``, ``authors`` (list), ``title``, ``year``.
    """

    def __init__(self, records: Iterable[MetadataRecord] = (), table: Optional[HomoglyphTable] = None):
        self.table = table or default_homoglyphs()
        self._records: dict[str, MetadataRecord] = {}
        self._by_title: dict[str, list[MetadataRecord]] = defaultdict(list)
        for rec in records:
            if rec.handle in self._records:
                raise ValueError(f"duplicate handle {rec.handle!r}")
            self._records[rec.handle] = rec
            self._by_title[normalize_text(rec.title, self.table)].append(rec)
        self._surnames = {
            h: {surname_of(a, self.table) for a in r.authors} - {""} for h, r in self._records.items()
        }

    def __len__(self):
        return len(self._records)

    def __contains__(self, handle) -> bool:
        return handle in self._records

    def __iter__(self):
        return iter(self._records.values())

    def get(self, handle: str) -> Optional[MetadataRecord]:
        return self._records.get(handle)

    def by_title(self, norm_title: str) -> list[MetadataRecord]:
        return self._by_title.get(norm_title, [])

    def titles(self):
        return self._by_title.items()

    def surnames(self, handle: str) -> set[str]:
        return self._surnames[handle]

    @classmethod
    def load(cls, path, table: Optional[HomoglyphTable] = None) -> "MetadataCollection":
        records = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                records.append(MetadataRecord(d["handle"], tuple(d.get("authors", ())), d["title"], str(d.get("year", ""))))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad metadata record ({exc})") from None
        return cls(records, table)

    def save(self, path):
        lines = [
            json.dumps({"handle": r.handle, "authors": list(r.authors), "title": r.title, "year": r.year}, ensure_ascii=False)
            for r in self._records.values()
        ]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _ref_surnames(author: str, table) -> set[str]:
    return {surname_of(a, table) for a in re.split(r"[,;]", author)} - {""}


def link_reference(
    ref: ParsedReference,
    collection: MetadataCollection,
    fuzzy: bool = False,
    fuzzy_threshold: float = 0.95,
) -> Optional[str]:
    """Handle of the unique record matching ``ref``, else None.

    Candidates share the normalized title; the year must agree when both
    sides have one and at least one surname must agree when both sides
    list authors.  With ``fuzzy`` on, a Jaro-Winkler title match above the
    threshold is tried when no exact title matches.
    """
    table = collection.table
    title = normalize_text(ref.clean_title or ref.title, table)
    if not title:
        return None
    candidates = collection.by_title(title)
    if not candidates and fuzzy:
        from rapidfuzz.distance import JaroWinkler

        candidates = [
            rec
            for norm, recs in collection.titles()
            if JaroWinkler.similarity(title, norm) >= fuzzy_threshold
            for rec in recs
        ]
    ref_names = _ref_surnames(ref.author, table)
    survivors = []
    for rec in candidates:
        if ref.year and rec.year and ref.year != rec.year:
            continue
        rec_names = collection.surnames(rec.handle)
        if ref_names and rec_names and not (ref_names & rec_names):
            continue
        survivors.append(rec)
    if len(survivors) > 1:
        log.info("ambiguous link for %r: %s", ref.title, [r.handle for r in survivors])
        return None
    return survivors[0].handle if survivors else None


@dataclass
class RegistryEntry:
    temp_handle: str
    key: str
    raw: str
    author: str
    title: str
    year: str
    first_seen: str
    promoted_to: Optional[str] = None

    @property
    def status(self) -> str:
        return "promoted" if self.promoted_to else "unlinked"


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()


class UnlinkedRegistry:
    """Append-only registry of unlinked references.

    Persisted as JSON lines: ``{"op": "add", ...}`` when a reference is first
    registered and ``{"op": "promote", ...}`` when its temporary handle is
    replaced.  Numbers are never reused, including after promotion.
    """

    def __init__(
        self,
        path=None,
        prefix: str = "spz:cyrkitec:references:",
        table: Optional[HomoglyphTable] = None,
        clock: Callable[[], str] = _utc_now,
    ):
        self.path = Path(path) if path else None
        self.prefix = prefix
        self.table = table or default_homoglyphs()
        self.clock = clock
        self._lock = threading.Lock()
        self._entries: dict[str, RegistryEntry] = {}  # by temp handle
        self._by_key: dict[str, str] = {}
        self._last = 0
        if self.path and self.path.exists():
            self._replay()

    def _replay(self):
        for lineno, line in enumerate(self.path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            op = rec.pop("op")
            if op == "add":
                entry = RegistryEntry(**rec)
                n = self._number(entry.temp_handle)
                if n != self._last + 1:
                    raise ValueError(f"{self.path}:{lineno}: registry numbering gap or reuse")
                self._last = n
                self._entries[entry.temp_handle] = entry
                self._by_key[entry.key] = entry.temp_handle
            elif op == "promote":
                self._entries[rec["temp_handle"]].promoted_to = rec["real_handle"]
            else:
                raise ValueError(f"{self.path}:{lineno}: unknown registry op {op!r}")

    def _number(self, handle: str) -> int:
        if not handle.startswith(self.prefix):
            raise ValueError(f"temporary handle {handle!r} lacks prefix {self.prefix!r}")
        return int(handle[len(self.prefix):])

    def _append(self, record: dict):
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(record, ensure_ascii=False) + "\n")

    def __len__(self):
        return len(self._entries)

    def __contains__(self, handle) -> bool:
        return handle in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def get(self, temp_handle: str) -> Optional[RegistryEntry]:
        return self._entries.get(temp_handle)

    def lookup(self, key: str) -> Optional[RegistryEntry]:
        handle = self._by_key.get(key)
        return self._entries[handle] if handle else None

    def register(self, ref: ParsedReference) -> RegistryEntry:
        key = normalize_key(ref.author, ref.clean_title, ref.year, self.table)
        with self._lock:
            existing = self.lookup(key)
            if existing is not None:
                return existing
            self._last += 1
            entry = RegistryEntry(
                temp_handle=f"{self.prefix}{self._last}",
                key=key,
                raw=ref.raw,
                author=ref.author,
                title=ref.title,
                year=ref.year,
                first_seen=self.clock(),
            )
            self._entries[entry.temp_handle] = entry
            self._by_key[key] = entry.temp_handle
            self._append({"op": "add", **entry.__dict__})
            return entry

    def mark_promoted(self, temp_handle: str, real_handle: str):
        with self._lock:
            entry = self._entries.get(temp_handle)
            if entry is None:
                raise LinkError(f"unknown temporary handle {temp_handle!r}")
            if entry.promoted_to:
                raise LinkError(f"{temp_handle} was already promoted to {entry.promoted_to}")
            entry.promoted_to = real_handle
            self._append({"op": "promote", "temp_handle": temp_handle, "real_handle": real_handle})


def register_unlinked(ref: ParsedReference, registry: UnlinkedRegistry) -> str:
    """Temporary handle for ``ref``; the same normalized key always gets the same one."""
    return registry.register(ref).temp_handle


@dataclass
class LinkRecord:
    citing: str
    reference: ParsedReference
    handle: Optional[str]
    link_kind: str  # "linked" | "unlinked"


class CitationStore:
    """In-memory citation records; output-tree stores subclass ``rewrite``."""

    def __init__(self, records: Iterable[LinkRecord] = ()):
        self.records = list(records)

    def add(self, record: LinkRecord):
        self.records.append(record)

    def rewrite(self, old: str, new: str) -> int:
        n = 0
        for rec in self.records:
            if rec.handle == old:
                rec.handle = new
                rec.link_kind = "linked"
                n += 1
        return n

    def count(self, handle: str) -> int:
        return sum(rec.handle == handle for rec in self.records)


def promote(
    temp_handle: str,
    real_handle: str,
    registry: UnlinkedRegistry,
    store: CitationStore,
    collection: Optional[MetadataCollection] = None,
) -> int:
    """Replace ``temp_handle`` by ``real_handle`` everywhere; returns the rewrite count."""
    entry = registry.get(temp_handle)
    if entry is None:
        raise LinkError(f"unknown temporary handle {temp_handle!r}")
    if entry.promoted_to:
        raise LinkError(f"{temp_handle} was already promoted to {entry.promoted_to}")
    if collection is not None and real_handle not in collection:
        raise LinkError(f"unknown handle {real_handle!r}")
    n = store.rewrite(temp_handle, real_handle)
    registry.mark_promoted(temp_handle, real_handle)
    return n
