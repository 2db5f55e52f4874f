"""Regenerate the bundled annotated reference corpus.

    python tools/make_annotations.py > src/cyrcite/data/gost_annotations.txt

Deterministic (fixed RNG seed).  Each output line is one <r> fragment.
"""
import random
import sys
from xml.sax.saxutils import escape

SEED = 20170615
N_GENERATED = 236

SURNAMES = [
    "Иванов", "Петров", "Сидоров", "Смирнов", "Кузнецов", "Попов", "Лебедев", "Козлов", "Новиков",
    "Морозов", "Волков", "Соловьев", "Васильев", "Зайцев", "Павлов", "Семенов", "Голубев", "Виноградов",
    "Богданов", "Воробьев", "Федоров", "Михайлов", "Беляев", "Тарасов", "Белов", "Комаров", "Орлов",
    "Киселев", "Макаров", "Андреев", "Ковалев", "Ильин", "Гусев", "Титов", "Кузьмин", "Кудрявцев",
    "Баранов", "Куликов", "Алексеев", "Степанов", "Яковлев", "Сорокин", "Сергеев", "Романов",
    "Захаров", "Борисов", "Королев", "Герасимов", "Пономарев", "Григорьев", "Лазарев", "Медведев",
    "Ершов", "Никитин", "Соболев", "Рябов", "Поляков", "Цветков", "Данилов", "Жуков", "Фролов",
    "Журавлев", "Николаев", "Крылов", "Максимов", "Сидорчук", "Гребенщиков", "Тулупов", "Бережной",
    "Коваленко", "Шевченко", "Бондаренко", "Ткаченко", "Кравченко", "Лысенко", "Полтавец", "Рыжих",
    "Черных", "Долгих", "Вишневский", "Покровский", "Левицкий", "Заболоцкий", "Оболенская", "Раевская",
    "Иванова", "Петрова", "Смирнова", "Кузнецова", "Попова", "Лебедева", "Новикова", "Морозова",
    "Волкова", "Соловьева", "Васильева", "Павлова", "Семенова", "Федорова", "Михайлова", "Орлова",
    "Макарова", "Андреева", "Ильина", "Сорокина", "Никитина", "Медведева", "Данилова", "Крылова",
    "Шмидт", "Гинзбург", "Рубинштейн", "Лотман", "Бахтин", "Лихачев", "Глазьев", "Аганбегян",
    "Полтерович", "Яременко", "Клейнер", "Маевский", "Нуреев", "Гринберг", "Мау", "Ясин",
]
LATIN_SURNAMES = [
    "Smith", "Johnson", "Brown", "Taylor", "Miller", "Wilson", "Moore", "Anderson", "Thomas",
    "Jackson", "White", "Harris", "Martin", "Garcia", "Robinson", "Clark", "Lewis", "Walker",
    "Hall", "Young", "King", "Wright", "Green", "Ivanov", "Petrov", "Kuznetsov",
    "Garfield", "Waltman", "Kostoff", "Lawrence", "Councill", "Hirsch", "Preston", "Zhang", "Wang",
]
INITIALS = "АБВГДЕЖЗИКЛМНОПРСТУФХЭЮЯ"
LATIN_INITIALS = "ABCDEFGHJKLMNOPRSTVW"

TITLE_HEADS = [
    "Проблемы развития", "Методы оценки", "Особенности формирования", "Анализ динамики",
    "Теоретические основы", "Институциональные аспекты", "Моделирование", "Структурные изменения",
    "Эволюция", "Факторы роста", "Оценка эффективности", "Механизмы регулирования",
    "Современные тенденции", "Роль государства в развитии", "Стратегия модернизации",
    "Пространственная организация", "Трансформация", "Инновационное развитие",
    "Государственное управление", "Социальная политика и развитие", "Прогнозирование",
    "Экономический рост и развитие", "Конкурентоспособность", "Историческая динамика",
    "Measuring", "Устойчивость", "Финансирование", "Управление рисками", "Модернизация",
    "Реформирование",
]
TITLE_TAILS = [
    "региональной экономики", "инвестиционных проектов", "рынка труда", "банковской системы",
    "малого предпринимательства", "промышленной политики", "человеческого капитала",
    "налоговой системы", "межбюджетных отношений", "научно-технического потенциала",
    "агропромышленного комплекса", "транспортной инфраструктуры", "денежно-кредитной политики",
    "внешнеэкономической деятельности", "жилищного строительства", "системы образования",
    "топливно-энергетического комплекса", "городских агломераций", "экономики знаний",
    "национальной инновационной системы", "фондового рынка", "пенсионной системы",
    "российских регионов", "крупных корпораций", "сельских территорий", "малых городов",
    "цифровой экономики", "научных библиотек", "открытых данных", "библиометрических показателей",
]
TITLE_SUFFIXES = [
    "", "", "", "", " в России", " в Российской Федерации", " в условиях кризиса",
    " в 1990-е годы", " на современном этапе", " в XX веке", " в XIX-XX вв", " в странах СНГ",
    ": опыт и перспективы", ": теория и практика", ": региональный аспект", ": проблемы и решения",
    " в Сибири", " на Урале", " (1985-1991 гг.)", " в период реформ",
]
EN_TITLES = [
    "Citation analysis in research evaluation",
    "A review of the literature on citation impact indicators",
    "Digital libraries and autonomous citation indexing",
    "An open-source reference string parsing package",
    "Open citation data for the social sciences",
    "Towards a common research information space",
    "The use and misuse of bibliometric indicators",
    "Measuring the impact of economics research",
    "Conditional random fields for information extraction",
    "Research information systems in Europe",
    "Building open metadata collections",
    "Reference linking in digital libraries",
    "Semantic linkage of research outputs",
    "Knowledge flows in economics",
]
JOURNALS = [
    "Вопросы экономики", "Проблемы прогнозирования", "Экономический журнал ВШЭ", "Мир России",
    "Социологические исследования", "Российский журнал менеджмента", "Экономика и математические методы",
    "Журнал новой экономической ассоциации", "Экономическая наука современной России",
    "Регион: экономика и социология", "Пространственная экономика", "Terra Economicus",
    "ЭКО", "Экономика региона", "Научно-техническая информация. Сер. 1",
    "Вестник Московского университета. Сер. 6: Экономика", "Известия РАН. Серия географическая",
    "Практическая онкология", "Финансы и кредит", "Деньги и кредит",
]
EN_JOURNALS = [
    "Scientometrics", "Journal of Informetrics", "Research Policy", "Science",
    "Computer Magazine", "D-Lib Magazine", "Journal of Documentation", "Economic Modelling",
]
PUBLISHERS = [
    ("М.", "Наука"), ("М.", "Экономика"), ("СПб.", "Питер"), ("М.", "Изд. дом ВШЭ"),
    ("Новосибирск", "ИЭОПП СО РАН"), ("М.", "ИНФРА-М"), ("Екатеринбург", "УрО РАН"),
    ("М.", "Дело"), ("Л.", "Наука"), ("М.", "Юрайт"), ("Новосибирск", "Наука"),
    ("М.", "Издательство МГУ"), ("СПб.", "Изд-во СПбГУ"), ("Казань", "Изд-во КФУ"),
    ("М.", "Логос"), ("М.", "Финансы и статистика"),
]
COLLECTIONS = [
    "Экономическая политика России", "Регионы России: проблемы развития",
    "Труды Института системного анализа", "Научные труды ИНП РАН",
    "Материалы Международной научной конференции", "Россия в глобальной экономике",
]
EN_CONFS = [
    ("Current Research Information Systems", "CRIS"),
    ("Theory and Practice of Digital Libraries", "TPDL"),
    ("Joint Conference on Digital Libraries", "JCDL"),
    ("Digital Libraries: Advanced Methods and Technologies", "RCDL"),
]
# Latin lookalikes injected into Cyrillic words
POLLUTE = {"е": "e", "о": "o", "а": "a", "р": "p", "с": "c", "х": "x", "у": "y", "Е": "E", "О": "O",
           "А": "A", "Р": "P", "С": "C", "Т": "T", "Н": "H", "К": "K", "М": "M", "В": "B"}


class Ref:
    """Builds a reference as (text, field) pieces."""

    def __init__(self):
        self.parts = []

    def o(self, text):
        self.parts.append((text, None))
        return self

    def f(self, fld, text):
        self.parts.append((text, fld))
        return self

    def xml(self):
        out = []
        for text, fld in self.parts:
            out.append(escape(text) if fld is None else f"<{fld}>{escape(text)}</{fld}>")
        return "<r>" + "".join(out) + "</r>"


def initials(rng, latin=False, n=None):
    pool = LATIN_INITIALS if latin else INITIALS
    n = n or rng.choice([1, 2, 2, 2])
    sep = "" if latin or rng.random() < 0.7 else " "
    return sep.join(rng.choice(pool) + "." for _ in range(n))


def pollute(rng, word):
    idx = [i for i, ch in enumerate(word) if ch in POLLUTE]
    if not idx:
        return word
    chars = list(word)
    for i in rng.sample(idx, min(len(idx), rng.choice([1, 1, 2]))):
        chars[i] = POLLUTE[chars[i]]
    return "".join(chars)


def dash(rng):
    return rng.choice(["–", "–", "–", "-", "—"])


def authors(rng, ref, k=None, latin=False):
    k = k or rng.choice([1, 1, 1, 2, 2, 3])
    names = rng.sample(LATIN_SURNAMES if latin else SURNAMES, k)
    for i, name in enumerate(names):
        if not latin and rng.random() < 0.08:
            name = pollute(rng, name)
        text = f"{name} {initials(rng, latin)}"
        if i < k - 1:
            text += ","
        ref.f("a", text)
        ref.o(" ")
    return ref


def title(rng, with_dot=True):
    t = f"{rng.choice(TITLE_HEADS)} {rng.choice(TITLE_TAILS)}{rng.choice(TITLE_SUFFIXES)}"
    if rng.random() < 0.06:
        words = t.split()
        j = rng.randrange(len(words))
        words[j] = pollute(rng, words[j])
        t = " ".join(words)
    return t + ("." if with_dot else "")


def year(rng):
    return str(rng.randint(1960, 2017))


def pages(rng):
    a = rng.randint(3, 300)
    return f"{a}–{a + rng.randint(3, 25)}"


def book(rng):
    r = authors(rng, Ref())
    r.f("t", title(rng))
    city, pub = rng.choice(PUBLISHERS)
    d = dash(rng)
    r.o(f" {d} {city}: {pub}, ").f("y", year(rng) + ".").o(f" {d} {rng.randint(90, 600)} с.")
    return r


def textbook(rng):
    r = authors(rng, Ref())
    r.f("t", title(rng, with_dot=False))
    kind = rng.choice(["учеб. пособие", "монография", "учебник", "сб. ст."])
    city, pub = rng.choice(PUBLISHERS)
    d = dash(rng)
    r.o(f" : {kind} / {initials(rng)} {rng.choice(SURNAMES)}. {d} {city}: {pub}, ")
    r.f("y", year(rng) + ".").o(f" {d} {rng.randint(90, 600)} с.")
    return r


def article(rng):
    r = authors(rng, Ref())
    r.f("t", title(rng, with_dot=False))
    d = dash(rng)
    r.o(f" // {rng.choice(JOURNALS)}. {d} ").f("y", year(rng) + ".")
    if rng.random() < 0.5:
        r.o(f" {d} Т. {rng.randint(1, 60)}, № {rng.randint(1, 12)}.")
    else:
        r.o(f" {d} № {rng.randint(1, 12)}.")
    r.o(f" {d} С. {pages(rng)}.")
    return r


def article_old(rng):
    # dashes glued to the following element: "-2008. -Т. 9, № 4. -С. 229-236."
    r = authors(rng, Ref())
    r.f("t", title(rng, with_dot=False))
    r.o(f" // {rng.choice(JOURNALS)}. ").f("y", "-" + year(rng) + ".")
    r.o(f" -Т. {rng.randint(1, 60)}, № {rng.randint(1, 12)}. -С. {pages(rng)}.")
    return r


def collection_article(rng):
    r = authors(rng, Ref())
    r.f("t", title(rng, with_dot=False))
    city, pub = rng.choice(PUBLISHERS)
    d = dash(rng)
    r.o(f" // {rng.choice(COLLECTIONS)} : сб. науч. тр. / под ред. {initials(rng)} {rng.choice(SURNAMES)}. {d} {city}: {pub}, ")
    r.f("y", year(rng) + ".").o(f" {d} С. {pages(rng)}.")
    return r


def edited(rng):
    r = Ref().f("t", title(rng, with_dot=False))
    city, pub = rng.choice(PUBLISHERS)
    d = dash(rng)
    r.o(f" / под ред. {initials(rng)} {rng.choice(SURNAMES)}. {d} {city}: {pub}, ")
    r.f("y", year(rng) + ".").o(f" {d} {rng.randint(90, 600)} с.")
    return r


def thesis(rng):
    r = authors(rng, Ref(), k=1)
    r.f("t", title(rng, with_dot=False))
    kind = rng.choice(["дис. … канд. экон. наук", "автореф. дис. … д-ра экон. наук", "дис. … канд. социол. наук"])
    d = dash(rng)
    r.o(f" : {kind}. {d} {rng.choice(['М.', 'СПб.', 'Новосибирск', 'Екатеринбург'])}, ")
    r.f("y", year(rng) + ".").o(f" {d} {rng.randint(20, 400)} с.")
    return r


def electronic(rng):
    r = authors(rng, Ref())
    r.f("t", title(rng, with_dot=False))
    d = dash(rng)
    r.o(f" [Электронный ресурс] // {rng.choice(JOURNALS)}. {d} ").f("y", str(rng.randint(2005, 2017)) + ".")
    r.o(f" {d} № {rng.randint(1, 12)}. {d} URL: http://www.journal{rng.randint(1, 99)}.ru/archive/{rng.randint(100, 999)}.pdf")
    r.o(f" (дата обращения: {rng.randint(10, 28)}.0{rng.randint(1, 9)}.2017).")
    return r


def many_authors(rng):
    r = authors(rng, Ref(), k=3)
    r.o("[и др.] ")
    r.f("t", title(rng))
    city, pub = rng.choice(PUBLISHERS)
    d = dash(rng)
    r.o(f" {d} {city}: {pub}, ").f("y", year(rng) + ".").o(f" {d} {rng.randint(90, 600)} с.")
    return r


def underblanked(rng):
    # no title: "Майстренко Н.А., Шейко С.Б. и сотр.//Практическая онкология. -2008. ..."
    r = authors(rng, Ref(), k=rng.choice([2, 3]))
    r.o(f"и сотр.//{rng.choice(JOURNALS)}. ").f("y", "-" + year(rng) + ".")
    r.o(f" -Т. {rng.randint(1, 30)}, № {rng.randint(1, 12)}. -С. {pages(rng)}.")
    return r


def english_article(rng):
    r = authors(rng, Ref(), latin=True)
    r.f("t", rng.choice(EN_TITLES) + ".")
    r.o(f" {rng.choice(EN_JOURNALS)}, ").f("y", year(rng) + ",")
    r.o(f" vol. {rng.randint(1, 120)}, no. {rng.randint(1, 12)}, pp. {pages(rng).replace('–', '-')}.")
    return r


def english_proceedings(rng):
    r = authors(rng, Ref(), latin=True)
    head = rng.choice(EN_TITLES)
    sub = rng.choice(["CRIS CERIF based Approach", "a Case Study", "an Overview", "Lessons Learned", "a Pilot Study"])
    r.f("t", f"{head}: {sub}.")
    name, acr = rng.choice(EN_CONFS)
    y = year(rng)
    r.o(f" In the proceedings of the {rng.randint(2, 20)}th International Conference on {name} ({acr} {y}). ")
    r.f("y", y)
    return r


def english_book(rng):
    r = authors(rng, Ref(), latin=True)
    r.f("t", rng.choice(EN_TITLES) + ".")
    city = rng.choice(["New York", "London", "Cambridge", "Amsterdam"])
    pub = rng.choice(["John Wiley & Sons", "Springer", "Elsevier", "MIT Press"])
    r.o(f" {city}: {pub}, ").f("y", year(rng))
    return r


GENERATORS = [
    (book, 5), (textbook, 3), (article, 6), (article_old, 2), (collection_article, 3),
    (edited, 2), (thesis, 2), (electronic, 2), (many_authors, 1), (underblanked, 1),
    (english_article, 2), (english_proceedings, 2), (english_book, 1),
]

FIXED = [
    # the worked example, single-line form
    "<r><a>Гордиенко Э.А.</a> <t>Варлаам Хутынский и архиепископ Антоний в житиях и мистериях "
    "XII-XVI века.</t> – М.; СПб., <y>2010.</y></r>",
    "<r><a>Майстренко Н.А.,</a> <a>Шейко С.Б.,</a> <a>Алентьев А.В.</a> и сотр.//Практическая онкология. "
    "<y>-2008.</y> -Т. 9, № 4. -С. 229-236.</r>",
    "<r><a>Garfield E.</a> <t>Citation indexing: its theory and application in science, technology and "
    "humanities.</t> New York: John Wiley &amp; Sons, <y>1979</y></r>",
]


def main(out=sys.stdout):
    rng = random.Random(SEED)
    gens = [g for g, w in GENERATORS for _ in range(w)]
    lines = list(FIXED)
    for _ in range(N_GENERATED):
        lines.append(rng.choice(gens)(rng).xml())
    out.write("# Annotated reference lines: <a> author, <t> title, <y> year.\n")
    out.write("# Generated by tools/make_annotations.py (plus hand-written lines at the top).\n")
    for line in lines:
        out.write(line + "\n")


if __name__ == "__main__":
    main()
