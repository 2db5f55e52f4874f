from pathlib import Path

import pytest

from cyrcite.config import Config
from cyrcite.labeler import Model
from cyrcite.training_data import load_annotations

HERE = Path(__file__).resolve().parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
ANNOTATIONS = HERE.parent / "src" / "cyrcite" / "data" / "gost_annotations.txt"

GORDIENKO_LINE = (
    "Гордиенко Э.А. Варлаам Хутынский и архиепископ Антоний в житиях и мистериях XII-XVI века. – М.; СПб., 2010."
)
GORDIENKO_FRAGMENT = (
    "<r><a>Гордиенко Э.А.</a> <t>Варлаам\nХутынский и архиепископ Антоний в житиях и\n"
    "мистериях XII-XVI века.</t> – М.; СПб.,\n<y>2010.</y></r>"
)
GORDIENKO_LABELS = (
    ["B-A", "I-A", "B-T"] + ["I-T"] * 10 + ["O", "O", "O", "B-Y"]
)
CRIS_REF_RAW = (
    "Parinov S. Towards an Open Data on how the Research Data are Used: CRIS CERIF based Approach. "
    "In the proceedings of the 12th International Conference on Current Research Information Systems "
    "(CRIS 2014). 2014"
)
MAISTRENKO_LINE = (
    "Майстренко Н.А., Шейко С.Б., Алентьев А.В. и сотр.//Практическая онкология. -2008. -Т. 9, № 4. -С. 229-236."
)


@pytest.fixture(scope="session")
def config():
    return Config()


@pytest.fixture(scope="session")
def lexicons(config):
    return config.lexicons()


@pytest.fixture(scope="session")
def table(lexicons):
    return lexicons.homoglyphs


@pytest.fixture(scope="session")
def model():
    return Model.default()


@pytest.fixture(scope="session")
def annotations():
    return load_annotations(ANNOTATIONS)


# acceptance summary --------------------------------------------------------

ACCEPTANCE: dict = {}


def record_criterion(number: int, name: str, passed: bool, detail: str):
    ACCEPTANCE[number] = (name, passed, detail)
    print(f"[criterion {number}] {'PASS' if passed else 'FAIL'} {name}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{number:>2}. {'PASS' if passed else 'FAIL'}  {name}: {detail}")
