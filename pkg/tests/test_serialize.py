import json
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyrcite.intext import InTextRef
from cyrcite.ref_parser import ParsedReference
from cyrcite.serialize import (
    CitationDocument,
    CitedReference,
    intext_xml,
    output_paths,
    read_intext_xml,
    read_references_xml,
    references_xml,
    write_error_sidecar,
    write_outputs,
)

CRIS_REF_ELEMENT = """<reference num="4" start="27513" end="27780" author="Parinov S. " title="Towards an Open Data on how the Research Data are Used CRIS CERIF based Approach" year="2014">
  <from_pdf>Parinov S. Towards an Open Data on how the Research Data are Used: CRIS CERIF based Approach. In the proceedings of the 12th International Conference on Current Research Information Systems (CRIS 2014). 2014</from_pdf>
</reference>"""

CRIS_INTEXT_ELEMENT = """<intextref>
  <Reference>4</Reference>
  <Exact>[4]</Exact>
  <Start>3950</Start>
  <End>3952</End>
  <Prefix>forms of the research outputs usage by integrating the semantic linkage technique into CRIS functionality [3],</Prefix>
  <Suffix>. As a result, a pilot of the open semantically enrichable research information system for researchers [5] has been provid</Suffix>
</intextref>"""


def squash(s):
    return re.sub(r">\s+<", "><", s.strip())


def cris_ref_doc():
    raw = re.search(r"<from_pdf>(.*)</from_pdf>", CRIS_REF_ELEMENT).group(1)
    ref = ParsedReference(
        num=4, raw=raw, span=(27513, 27780), author="Parinov S. ",
        title="Towards an Open Data on how the Research Data are Used CRIS CERIF based Approach", year="2014",
    )
    return CitationDocument("cris/cris2016", [CitedReference(ref)])


def test_cris_reference_element():
    xml = references_xml(cris_ref_doc())
    body = re.search(r"<reference .*</reference>", xml, re.S).group(0)
    assert squash(body) == squash(CRIS_REF_ELEMENT)


def test_cris_intext_element():
    prefix = re.search(r"<Prefix>(.*)</Prefix>", CRIS_INTEXT_ELEMENT).group(1)
    suffix = re.search(r"<Suffix>(.*)</Suffix>", CRIS_INTEXT_ELEMENT).group(1)
    doc = CitationDocument("cris/cris2016", intext=[InTextRef(4, "[4]", (3950, 3952), prefix, suffix)])
    xml = intext_xml(doc)
    body = re.search(r"<intextref>.*</intextref>", xml, re.S).group(0)
    assert squash(body) == squash(CRIS_INTEXT_ELEMENT)


def test_empty_roots():
    doc = CitationDocument("c/p")
    assert references_xml(doc).endswith('<references document="c/p"/>\n')
    assert intext_xml(doc).endswith('<intextrefs document="c/p"/>\n')
    assert read_references_xml(references_xml(doc)) == ("c/p", [])


def test_handle_attribute_last():
    doc = cris_ref_doc()
    doc.references[0].handle = "RePEc:rus:mqijxk:34"
    attrs = re.findall(r'(\w+)="', re.search(r"<reference [^>]*>", references_xml(doc)).group(0))
    assert attrs == ["num", "start", "end", "author", "title", "year", "handle"]


nasty = st.text(alphabet=st.sampled_from(list('ab <>&"\'\n\tя«»[]')), max_size=30)


@given(nasty, nasty, nasty)
def test_escape_roundtrip(prefix, suffix, title):
    ref = ParsedReference(num=1, raw=title + "x", span=(0, len(title) + 1), author=title, title=title, year="2001")
    doc = CitationDocument("c/p", [CitedReference(ref, "h&<1>")], [InTextRef(1, "[1]", (5, 8), prefix, suffix)])
    _, refs = read_references_xml(references_xml(doc))
    assert refs[0].ref.title == title and refs[0].ref.author == title and refs[0].ref.raw == title + "x"
    assert refs[0].handle == "h&<1>"
    _, its = read_intext_xml(intext_xml(doc))
    assert its == doc.intext


def test_write_outputs_and_sidecar(tmp_path):
    text = "see [1]\nReferences\n1. A. 2001"
    ref = ParsedReference(num=1, raw="A. 2001", span=(22, 29), title="A.", year="2001")
    doc = CitationDocument("c/p", [CitedReference(ref, "h", "linked")], [InTextRef(1, "[1]", (4, 7), "see ", "")], text=text)
    paths = write_outputs(doc, tmp_path)
    assert all(paths[k].exists() for k in ("refs", "intext", "refs_jsonl", "intext_jsonl"))
    row = json.loads(paths["refs_jsonl"].read_text())
    assert row["handle"] == "h" and row["start"] == 22
    sidecar = write_error_sidecar(tmp_path, "c/p", "parse", "Boom", "broken")
    assert [p.name for p in (tmp_path / "c").iterdir()] == [sidecar.name]
    assert json.loads(sidecar.read_text())["status"] == "unprocessed"
    write_outputs(doc, tmp_path)
    assert not sidecar.exists()


def test_bad_span_writes_nothing(tmp_path):
    ref = ParsedReference(num=1, raw="zzz", span=(0, 3))
    doc = CitationDocument("c/p", [CitedReference(ref)], text="abc")
    with pytest.raises(ValueError):
        write_outputs(doc, tmp_path)
    assert not any(p.exists() for p in output_paths(tmp_path, "c/p").values())
