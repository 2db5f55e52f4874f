"""Synthetic documents for tests, fixtures and benchmarks.

Documents come out in the page/item JSON layout accepted by
:func:`cyrcite.docingest.parse_document`.  Lines are split into several
items on one baseline; the split whitespace is kept on the left item, the
right item, or dropped (then the linearizer re-inserts it), so the
linearized text always equals ``"\\n".join(all lines)``.
"""
from __future__ import annotations

import random
from typing import Sequence

__all__ = ["document_json", "joined_text", "synthetic_pages", "REFERENCE_LINES", "BODY_WORDS"]

BODY_WORDS = (
    "анализ данных показывает что развитие региона зависит от инвестиций и структуры экономики "
    "в работе рассмотрены методы оценки эффективности проектов а также роль государства "
    "the results confirm that citation data improve research evaluation in several fields"
).split()

REFERENCE_LINES = (
    "Иванов И.И. Проблемы развития региональной экономики. – М.: Наука, 2005. – 320 с.",
    "Петров П.П., Сидоров С.С. Методы оценки эффективности инвестиционных проектов // Вопросы экономики. – 2010. – № 4. – С. 12–30.",
    "Смирнова А.В. Трансформация банковской системы в России. – СПб.: Питер, 2012. – 210 с.",
    "Кузнецов В.Г. Моделирование рынка труда : дис. … канд. экон. наук. – Новосибирск, 2008. – 180 с.",
    "Garfield E. Citation analysis as a tool in journal evaluation. Science, 1972, vol. 178, pp. 471-479.",
    "Лебедев О.Н. Институциональные аспекты налоговой системы // Экономика региона. – 2015. – Т. 11, № 2. – С. 5–17.",
)


def _split_line(line: str, rng: random.Random) -> list[str]:
    words = line.split(" ")
    if len(words) < 2 or rng.random() < 0.3:
        return [line]
    cuts = sorted(rng.sample(range(1, len(words)), min(len(words) - 1, rng.randint(1, 3))))
    pieces, last = [], 0
    for c in cuts + [len(words)]:
        pieces.append(" ".join(words[last:c]))
        last = c
    out = [pieces[0]]
    for p in pieces[1:]:
        mode = rng.randrange(3)
        # dropping the blank is only safe between two non-blank edges
        if mode == 2 and not (out[-1] and p and not out[-1][-1].isspace() and not p[0].isspace()):
            mode = 0
        if mode == 0:
            out[-1] += " "
            out.append(p)
        elif mode == 1:
            out.append(" " + p)
        else:
            out.append(p)  # the linearizer inserts the blank
    return out


def document_json(pages: Sequence[Sequence[str]], rng: random.Random | None = None) -> list[dict]:
    """Page/item JSON whose linearization is ``joined_text(pages)``."""
    rng = rng or random.Random(0)
    doc = []
    for pno, lines in enumerate(pages, 1):
        items = []
        y = 780.0
        for line in lines:
            x = 72.0
            for piece in _split_line(line, rng):
                size = 10.0
                width = round(len(piece) * 4.7, 3)
                jitter = round(rng.uniform(-0.2, 0.2), 3)  # same line within tolerance
                items.append(
                    {
                        "str": piece,
                        "dir": "ltr",
                        "width": width,
                        "height": size,
                        "transform": [size, 0, 0, size, round(x, 3), round(y + jitter, 3)],
                        "fontName": "g_d0_f2",
                    }
                )
                x += width
            y -= 14.0
        doc.append({"page": pno, "textContent": {"items": items}})
    return doc


def joined_text(pages: Sequence[Sequence[str]]) -> str:
    return "\n".join(line for page in pages for line in page)


def synthetic_pages(
    rng: random.Random,
    n_pages: int = 20,
    lines_per_page: int = 50,
    n_refs: int = 40,
    heading: str = "Список литературы",
) -> list[list[str]]:
    """Body text with bracketed citations, then a numbered reference list."""
    ref_lines = [heading] + [f"{k}. {REFERENCE_LINES[(k - 1) % len(REFERENCE_LINES)]}" for k in range(1, n_refs + 1)]
    body_count = n_pages * lines_per_page - len(ref_lines)
    body = []
    for _ in range(body_count):
        words = [rng.choice(BODY_WORDS) for _ in range(rng.randint(8, 14))]
        if rng.random() < 0.4:
            k = rng.randint(1, n_refs)
            words.insert(rng.randrange(len(words)), rng.choice([f"[{k}]", f"[{k}, {rng.randint(1, n_refs)}]"]))
        body.append(" ".join(words))
    lines = body + ref_lines
    return [lines[i:i + lines_per_page] for i in range(0, len(lines), lines_per_page)]
