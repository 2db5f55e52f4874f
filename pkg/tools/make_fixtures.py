"""Regenerate the test fixture documents and metadata collection.

    python tools/make_fixtures.py            # writes tests/fixtures/

Documents are page/item JSON in the PDF.js text-content layout.  Each text
line becomes one or more items on the same baseline, so the linearized
text is exactly the lines joined by newlines.
"""
import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"

if str(ROOT / "src") not in sys.path:
    sys.path.insert(0, str(ROOT / "src"))

from cyrcite.testing import document_json  # noqa: E402

CRIS_REF_RAW = (
    "Parinov S. Towards an Open Data on how the Research Data are Used: CRIS CERIF based Approach. "
    "In the proceedings of the 12th International Conference on Current Research Information Systems "
    "(CRIS 2014). 2014"
)
CRIS_SENTENCE_PREFIX = (
    "forms of the research outputs usage by integrating the semantic linkage technique into CRIS functionality [3],"
)
CRIS_SENTENCE_SUFFIX = (
    ". As a result, a pilot of the open semantically enrichable research information system for researchers [5] "
    "has been provided"
)

ENGLISH_PAGES = [
    [
        "Available online at www.sciencedirect.com",
        "Procedia Computer Science 00 (2016) 000-000",
        "Using citation content analysis in a research information system",
        "Abstract",
        "We describe a system that builds citation relationships from the full texts of papers",
        "and enriches them with the context of each in-text reference.",
        "1. Introduction",
        "Citation indexes are usually built from publisher data [1]. Autonomous citation indexing",
        "removes this dependency [2] and was successfully applied to economics papers [1, 2].",
        "Our previous work developed different",
        CRIS_SENTENCE_PREFIX + "[4]" + CRIS_SENTENCE_SUFFIX + " to the",
        "community. The same approach is used for papers in Russian [6] and for the analysis",
        "of citation contexts [2-4].",
        "1",
    ],
    [
        "2. Data and methods",
        "Each PDF document is converted to JSON that keeps the text of every item together with its",
        "position on the page [5]. References are parsed with a sequence labeler trained on annotated",
        "strings; in-text references are taken from square brackets, as described in [4].",
        "References",
        "1. Cameron R.D., Hall W. Building an autonomous citation index for grey literature: the",
        "Economics working papers case. In the proceedings of the 7th International Conference on Grey",
        "Literature (GL7 2005). 2005",
        "2. Lawrence S., Giles C.L., Bollacker K. Digital libraries and autonomous citation indexing.",
        "Computer Magazine, 1999, vol. 32, no. 6, pp. 67-71.",
        "3. Kogalovsky M., Sokolov A. Semantic Linkage of Control Systems of Scientific Activities: a Case",
        "Study. In the proceedings of the 11th International Conference on Current Research Information",
        "Systems (CRIS 2012). 2012",
        "4. " + CRIS_REF_RAW,
        "5. Peters H., Zimmermann C. The economics of open bibliographic data provision. Economic Analysis",
        "and Policy, 2009, vol. 39, no. 1, pp. 143-152.",
        "6. Соколов А.Н. Система Соционет как платформа для разработки научных информационных ресурсов",
        "и онлайновых сервисов // Научно-техническая информация. Сер. 1. – 2012. – № 12. – С. 12–17.",
    ],
]

RUSSIAN_PAGES = [
    [
        " ",
        "УДК 330.3",
        "ИСТОРИЧЕСКИЕ ИСТОЧНИКИ И ЭКОНОМИЧЕСКАЯ ИСТОРИЯ РЕГИОНА",
        "Аннотация. В статье рассматриваются источники по истории Новгородской земли [1] и их",
        "использование в региональных исследованиях [2, 3]. Житийная литература изучена в работах",
        "[1–3], а методы оценки эффективности – в [4]. Для XX века данные ограничены [5].",
        "Введение",
        "Первые попытки систематизации предприняты в конце XIX века [2]. Современные подходы",
        "опираются на количественные методы [4, 5] и на открытые данные [6].",
    ],
    [
        "Основная часть",
        "Как показано в [3], сопоставление источников требует единой методики. Мы следуем [1] и [6].",
        "Список литературы",
        "1. Гордиенко Э.А. Варлаам Хутынский и архиепископ Антоний в житиях и мистериях XII-XVI века. – М.; СПб., 2010.",
        "2. Лихачев Д.С. Развитие русской литературы X–XVII веков. – Л.: Наука, 1973. – 254 с.",
        "3. Майстренко Н.А., Шейко С.Б., Алентьев А.В. и сотр.//Практическая онкология. -2008. -Т. 9, № 4. -С. 229-236.",
        "4. Иванов И.И., Петров П.П. Методы оценки эффективности инвестиционных проектов // Вопросы",
        "экономики. – 2005. – № 3. – С. 45–60.",
        "5. Сидоров А.В. Экономическая история Poccии в XX веке. – М.: Наука, 1999. – 312 с.",
        "6. Young D. Open citation data for the social sciences. Scientometrics, 2016, vol. 108, no. 2,",
        "pp. 1-15.",
    ],
]

COLLECTION = [
    {"handle": "RePEc:rus:mqijxk:34", "authors": ["Parinov S."],
     "title": "Towards an Open Data on how the Research Data are Used: CRIS CERIF based Approach", "year": "2014"},
    {"handle": "RePEc:rus:mqijxk:12", "authors": ["Kogalovsky M.", "Sokolov A."],
     "title": "Semantic Linkage of Control Systems of Scientific Activities: a Case Study", "year": "2012"},
    {"handle": "spz:neicon:vopreco:y:2005:i:3:p:45-60", "authors": ["Иванов И.И.", "Петров П.П."],
     "title": "Методы оценки эффективности инвестиционных проектов", "year": "2005"},
    {"handle": "spz:neicon:nti:y:2012:i:12:p:12-17", "authors": ["Соколов А.Н."],
     "title": "Система Соционет как платформа для разработки научных информационных ресурсов и онлайновых сервисов",
     "year": "2012"},
    # same title as reference 2 of the Russian document but a different year: must not link
    {"handle": "spz:neicon:lit:y:1998:i:1:p:1", "authors": ["Лихачев Д.С."],
     "title": "Развитие русской литературы X–XVII веков", "year": "1998"},
]


def write_json(path: Path, data):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def main():
    rng = random.Random(4)
    write_json(FIXTURES / "docs" / "cris" / "cris2016.json", document_json(ENGLISH_PAGES, rng))
    write_json(FIXTURES / "docs" / "neicon" / "gordienko2010.json", document_json(RUSSIAN_PAGES, rng))
    coll = FIXTURES / "collection.jsonl"
    coll.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in COLLECTION), encoding="utf-8")

    bad = FIXTURES / "bad"
    bad.mkdir(parents=True, exist_ok=True)
    # truncated mid-item, as left behind by a conversion that died
    good = json.dumps(document_json(ENGLISH_PAGES[:1], random.Random(1)), ensure_ascii=False)
    (bad / "corrupt.json").write_text(good[: len(good) // 2], encoding="utf-8")
    # a scanned PDF: pages exist, every item is blank
    empty = [{"page": p, "textContent": {"items": [{"str": " ", "dir": "ltr", "width": 1.2, "height": 23.04,
                                                   "transform": [4.8, 0, 0, 4.8, 118.3, 736.64], "fontName": "g_d0_f1"}]}}
             for p in (1, 2)]
    write_json(bad / "empty.json", empty)


if __name__ == "__main__":
    main()
