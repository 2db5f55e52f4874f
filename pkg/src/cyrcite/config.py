"""Pipeline configuration, loadable from a versioned JSON file."""
from __future__ import annotations

import dataclasses
import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

CONFIG_VERSION = 1

DEFAULT_HEADINGS = (
    "Список литературы",
    "Литература",
    "Библиографический список",
    "References",
    "Библиография",
)


def _default_year_max() -> int:
    return datetime.date.today().year + 1


@dataclass
class Config:
    seed_lexicon: Optional[str] = None  # None -> bundled seed list
    abbreviations: Optional[str] = None
    homoglyphs: Optional[str] = None
    headings: tuple[str, ...] = DEFAULT_HEADINGS
    year_min: int = 1500
    year_max: int = field(default_factory=_default_year_max)
    context_width: int = 200
    expand_brackets: bool = True
    fuzzy_link: bool = False
    fuzzy_threshold: float = 0.95
    handle_prefix: str = "spz:cyrkitec:references:"
    min_mined_count: int = 1
    jobs: Optional[int] = None  # None -> logical CPU count
    line_tolerance: float = 0.5  # max |dy| between items on one text line

    @classmethod
    def load(cls, path) -> "Config":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        version = raw.pop("version", CONFIG_VERSION)
        if version != CONFIG_VERSION:
            raise ValueError(f"unsupported config version {version}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "headings" in raw:
            raw["headings"] = tuple(raw["headings"])
        return cls(**raw)

    def save(self, path):
        data = {"version": CONFIG_VERSION, **dataclasses.asdict(self)}
        data["headings"] = list(self.headings)
        Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")

    def replace(self, **changes) -> "Config":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def lexicons(self):
        from .lexicons import AbbreviationList, Lexicons, NameLexicon
        from .normalize import HomoglyphTable, default_homoglyphs

        return Lexicons(
            names=NameLexicon.load(self.seed_lexicon) if self.seed_lexicon else NameLexicon.default(),
            abbreviations=(
                AbbreviationList.load(self.abbreviations) if self.abbreviations else AbbreviationList.default()
            ),
            homoglyphs=HomoglyphTable.load(self.homoglyphs) if self.homoglyphs else default_homoglyphs(),
        )
