"""Bracketed numeric in-text references, their contexts and frequency bins."""
from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .docingest import DocumentText

__all__ = [
    "InTextRef",
    "Frequency",
    "FrequencyBin",
    "bin_for_count",
    "extract_intext_refs",
    "frequency_bins",
]

_NUM = r"\d{1,4}"
_ITEM = rf"{_NUM}(?:\s*[-–—]\s*{_NUM})?"
_BRACKET_LIST = re.compile(rf"\[\s*({_ITEM}(?:\s*[,;]\s*{_ITEM})*)\s*\]")
_BRACKET_PLAIN = re.compile(rf"\[({_NUM})\]")
_RANGE = re.compile(rf"({_NUM})\s*[-–—]\s*({_NUM})")


@dataclass(frozen=True)
class InTextRef:
    reference_num: int
    exact: str
    span: tuple[int, int]
    prefix: str
    suffix: str

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]


def _expand(body: str) -> list[int]:
    nums = []
    for part in re.split(r"\s*[,;]\s*", body.strip()):
        m = _RANGE.fullmatch(part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo <= hi:
                nums.extend(range(lo, hi + 1))
        else:
            nums.append(int(part))
    return nums


def extract_intext_refs(
    doc: Union[DocumentText, str],
    ref_section: tuple[int, int],
    max_ref_num: int,
    context_width: int = 200,
    expand: bool = True,
) -> list[InTextRef]:
    """Find ``[n]``, ``[n, m]`` and ``[n-m]`` markers before the reference section.

    Lists and ranges expand to one :class:`InTextRef` per number, all
    sharing the bracket's text and span; ``expand=False`` accepts plain
    ``[n]`` only.  Numbers outside ``1..max_ref_num`` are dropped.  Contexts
    are clipped at the document start and at the reference section.
    """
    text = doc.text if isinstance(doc, DocumentText) else doc
    limit = ref_section[0]
    body = text[:limit]
    pattern = _BRACKET_LIST if expand else _BRACKET_PLAIN
    out = []
    for m in pattern.finditer(body):
        nums = _expand(m.group(1)) if expand else [int(m.group(1))]
        s, e = m.span()
        prefix = text[max(0, s - context_width):s]
        suffix = text[e:min(e + context_width, limit)]
        seen = set()
        for n in nums:
            if 1 <= n <= max_ref_num and n not in seen:
                seen.add(n)
                out.append(InTextRef(n, m.group(0), (s, e), prefix, suffix))
    return out


class Frequency(str, enum.Enum):
    ONCE = "Once"
    TWO_TO_FOUR = "TwoToFour"
    FIVE_OR_MORE = "FiveOrMore"

    def __str__(self):
        return self.value


def bin_for_count(count: int) -> Frequency:
    if count < 1:
        raise ValueError("a mentioned reference has count >= 1")
    if count == 1:
        return Frequency.ONCE
    if count <= 4:
        return Frequency.TWO_TO_FOUR
    return Frequency.FIVE_OR_MORE


@dataclass(frozen=True)
class FrequencyBin:
    count: int
    bin: Frequency


def frequency_bins(refs: Union[Iterable[InTextRef], Mapping[int, int]]) -> dict[int, FrequencyBin]:
    """Mention count and frequency bin per reference number.

    Accepts extracted references or a ready ``{num: count}`` mapping.
    """
    if isinstance(refs, Mapping):
        counts = Counter(refs)
    else:
        counts = Counter(r.reference_num for r in refs)
    return {n: FrequencyBin(c, bin_for_count(c)) for n, c in sorted(counts.items())}
