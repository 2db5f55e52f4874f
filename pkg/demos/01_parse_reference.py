"""Parse a single GOST-style reference line.

Run from the repository root:

    python demos/01_parse_reference.py

The bundled model labels each whitespace token as author, title, year or
other; the labels are then collapsed into fields.  Lookalike Latin letters
inside Cyrillic words ("Poccии") are repaired before features are computed.
"""
from cyrcite import Config, Model, parse_reference

config = Config()
lexicons = config.lexicons()
model = Model.default()
years = (config.year_min, config.year_max)

lines = [
    "Гордиенко Э.А. Варлаам Хутынский и архиепископ Антоний в житиях и мистериях XII-XVI века. – М.; СПб., 2010.",
    "Сидоров А.В. Экономическая история Poccии в XX веке. – М.: Наука, 1999. – 312 с.",
    "Garfield E. Citation analysis as a tool in journal evaluation. Science, 1972, vol. 178, pp. 471-479.",
]

for line in lines:
    ref = parse_reference(line, model, lexicons, years)
    print(line)
    print(f"  author: {ref.author!r}")
    print(f"  title:  {ref.clean_title!r}")
    print(f"  year:   {ref.year!r}")
    # per-token confidence, useful for spotting shaky parses
    low = [(tok, round(c, 3)) for tok, c in zip(line.split(), ref.confidences) if c < 0.9]
    print(f"  low-confidence tokens: {low or 'none'}")
    print()
