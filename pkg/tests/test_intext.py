import random
import re
from collections import Counter

import pytest

from cyrcite.intext import Frequency, bin_for_count, extract_intext_refs, frequency_bins

SENTENCE = (
    "forms of the research outputs usage by integrating the semantic linkage technique into CRIS functionality [3], [4]. "
    "As a result, a pilot of the open semantically enrichable research information system for researchers [5] has been provided"
)


def test_cris_sentence():
    refs = extract_intext_refs(SENTENCE, (len(SENTENCE), len(SENTENCE)), 10)
    r = next(r for r in refs if r.reference_num == 4)
    assert r.exact == "[4]"
    assert SENTENCE[r.start:r.end] == "[4]"
    assert r.prefix.endswith("functionality [3], ")
    assert r.suffix.startswith(". As a result")
    assert len(r.prefix) <= 200 and len(r.suffix) <= 200


def test_no_brackets():
    assert extract_intext_refs("no citations here", (17, 17), 5) == []


def test_range_expansion():
    text = "see [2-4] here"
    refs = extract_intext_refs(text, (len(text), len(text)), 10)
    assert [r.reference_num for r in refs] == [2, 3, 4]
    assert len({r.span for r in refs}) == 1


def test_expansion_off_accepts_plain_only():
    text = "see [2-4] and [1, 2] and [7]"
    refs = extract_intext_refs(text, (len(text), len(text)), 10, expand=False)
    assert [r.reference_num for r in refs] == [7]


def test_out_of_range_and_section_boundary():
    text = "a [1] b [99] c [0]\nReferences\n1. x [1]"
    sec = text.index("References")
    refs = extract_intext_refs(text, (sec, len(text)), 5)
    assert [r.reference_num for r in refs] == [1]
    assert "References" not in refs[0].suffix


def test_context_clipping():
    text = "x" * 300 + "[1]" + "y" * 300
    r = extract_intext_refs(text, (len(text), len(text)), 1, context_width=200)[0]
    assert r.prefix == "x" * 200 and r.suffix == "y" * 200
    r = extract_intext_refs("[1] tail", (8, 8), 1)[0]
    assert r.prefix == ""


def test_bins():
    assert frequency_bins({4: 1})[4].bin is Frequency.ONCE
    assert frequency_bins({1: 3})[1].bin is Frequency.TWO_TO_FOUR
    assert bin_for_count(4) is Frequency.TWO_TO_FOUR
    assert bin_for_count(5) is Frequency.FIVE_OR_MORE
    with pytest.raises(ValueError):
        bin_for_count(0)


def naive_counts(text, limit, max_ref):
    """Independent rescan oracle: walk the text char by char."""
    counts = Counter()
    i = 0
    while i < limit:
        if text[i] != "[":
            i += 1
            continue
        j = text.find("]", i)
        if j == -1 or j >= limit:
            break
        inner = text[i + 1:j]
        nums = set()
        ok = bool(inner.strip())
        for part in inner.replace(";", ",").split(","):
            part = part.strip().replace("–", "-")
            if part.isdigit():
                nums.add(int(part))
            elif re.fullmatch(r"\d+\s*-\s*\d+", part):
                a, b = (int(x) for x in part.split("-"))
                nums.update(range(a, b + 1))
            else:
                ok = False
        if ok:
            for n in nums:
                if 1 <= n <= max_ref:
                    counts[n] += 1
        i = j + 1
    return counts


def random_document(rng):
    n_refs = rng.randint(3, 25)
    words = []
    for _ in range(rng.randint(50, 300)):
        r = rng.random()
        if r < 0.06:
            words.append(f"[{rng.randint(1, n_refs + 3)}]")
        elif r < 0.08:
            words.append(f"[{rng.randint(1, n_refs)}, {rng.randint(1, n_refs)}]")
        elif r < 0.09:
            a = rng.randint(1, n_refs)
            words.append(f"[{a}-{a + rng.randint(0, 3)}]")
        elif r < 0.1:
            words.append(rng.choice(["[a]", "[12b]", "[]", "[,]"]))
        else:
            words.append(rng.choice(["текст", "word", "данные", "2010", "(1)"]))
    body = " ".join(words)
    tail = "\nReferences\n" + "\n".join(f"{k}. Ref [{k}]" for k in range(1, n_refs + 1))
    return body + tail, len(body), n_refs


def test_bins_match_rescan_oracle():
    rng = random.Random(11)
    for _ in range(50):
        text, limit, n = random_document(rng)
        refs = extract_intext_refs(text, (limit, len(text)), n)
        got = {k: b.count for k, b in frequency_bins(refs).items()}
        assert got == dict(naive_counts(text, limit, n))
