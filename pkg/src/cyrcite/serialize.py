"""Per-document citation XML (references and in-text references) + JSON-lines mirrors.

Layout of ``<paper-id>-refs.xml``::

    <?xml version="1.0" encoding="UTF-8"?>
    <references document="coll/paper">
      <reference num="4" start="27513" end="27780" author="..." title="..." year="2014" handle="...">
        <from_pdf>...</from_pdf>
      </reference>
    </references>

and of ``<paper-id>-intext.xml``::

    <intextrefs document="coll/paper">
      <intextref>
        <Reference>4</Reference><Exact>[4]</Exact><Start>3950</Start><End>3953</End>
        <Prefix>...</Prefix><Suffix>...</Suffix>
      </intextref>
    </intextrefs>

(one child per line in the real output).  ``start``/``end`` are half-open
code point offsets into the linearized document text.
"""
from __future__ import annotations

import json
import os
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .intext import InTextRef
from .ref_parser import ParsedReference

__all__ = [
    "CitationDocument",
    "CitedReference",
    "references_xml",
    "intext_xml",
    "write_references_xml",
    "write_intext_xml",
    "read_references_xml",
    "read_intext_xml",
    "output_paths",
    "write_outputs",
    "write_error_sidecar",
    "clear_outputs",
]

_XML_DECL = '<?xml version="1.0" encoding="UTF-8"?>\n'
# characters XML 1.0 cannot carry at all
_INVALID_XML = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f￾￿]")


def _text(value: str) -> str:
    value = _INVALID_XML.sub("", value)
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("\r", "&#13;")


def _attr(value) -> str:
    value = _text(str(value))
    return value.replace('"', "&quot;").replace("\n", "&#10;").replace("\t", "&#9;")


@dataclass
class CitedReference:
    ref: ParsedReference
    handle: Optional[str] = None
    link_kind: Optional[str] = None  # "linked" | "unlinked" | None (no title)


@dataclass
class CitationDocument:
    doc_id: str
    references: list[CitedReference] = field(default_factory=list)
    intext: list[InTextRef] = field(default_factory=list)
    status: str = "processed"
    error_code: Optional[str] = None
    text: Optional[str] = None  # linearized text, for substring checks

    def check_spans(self):
        """Every start/end pair must cut the recorded text out of the document."""
        if self.text is None:
            return
        for c in self.references:
            s, e = c.ref.span
            if self.text[s:e] != c.ref.raw:
                raise ValueError(f"reference {c.ref.num}: span does not match raw text")
        for r in self.intext:
            if self.text[r.start:r.end] != r.exact:
                raise ValueError(f"in-text reference at {r.start}: span does not match")


def references_xml(doc: CitationDocument) -> str:
    head = f'{_XML_DECL}<references document="{_attr(doc.doc_id)}"'
    if not doc.references:
        return head + "/>\n"
    lines = [head + ">"]
    for c in doc.references:
        r = c.ref
        attrs = [
            ("num", r.num),
            ("start", r.span[0]),
            ("end", r.span[1]),
            ("author", r.author),
            ("title", r.title),
            ("year", r.year),
        ]
        if c.handle:
            attrs.append(("handle", c.handle))
        attr_s = " ".join(f'{k}="{_attr(v)}"' for k, v in attrs)
        lines.append(f"  <reference {attr_s}>")
        lines.append(f"    <from_pdf>{_text(r.raw)}</from_pdf>")
        lines.append("  </reference>")
    lines.append("</references>")
    return "\n".join(lines) + "\n"


def intext_xml(doc: CitationDocument) -> str:
    head = f'{_XML_DECL}<intextrefs document="{_attr(doc.doc_id)}"'
    if not doc.intext:
        return head + "/>\n"
    lines = [head + ">"]
    for r in doc.intext:
        lines.append("  <intextref>")
        lines.append(f"    <Reference>{r.reference_num}</Reference>")
        lines.append(f"    <Exact>{_text(r.exact)}</Exact>")
        lines.append(f"    <Start>{r.start}</Start>")
        lines.append(f"    <End>{r.end}</End>")
        lines.append(f"    <Prefix>{_text(r.prefix)}</Prefix>")
        lines.append(f"    <Suffix>{_text(r.suffix)}</Suffix>")
        lines.append("  </intextref>")
    lines.append("</intextrefs>")
    return "\n".join(lines) + "\n"


def _write(path: Path, content: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(content)
    os.replace(tmp, path)


def write_references_xml(doc: CitationDocument, path) -> Path:
    doc.check_spans()
    path = Path(path)
    _write(path, references_xml(doc))
    return path


def write_intext_xml(doc: CitationDocument, path) -> Path:
    doc.check_spans()
    path = Path(path)
    _write(path, intext_xml(doc))
    return path


def read_references_xml(path_or_text) -> tuple[str, list[CitedReference]]:
    root = _parse(path_or_text)
    out = []
    for el in root.findall("reference"):
        a = el.attrib
        ref = ParsedReference(
            num=int(a["num"]),
            raw=el.findtext("from_pdf", default=""),
            span=(int(a["start"]), int(a["end"])),
            author=a.get("author", ""),
            title=a.get("title", ""),
            year=a.get("year", ""),
        )
        out.append(CitedReference(ref, a.get("handle")))
    return root.get("document", ""), out


def read_intext_xml(path_or_text) -> tuple[str, list[InTextRef]]:
    root = _parse(path_or_text)
    out = []
    for el in root.findall("intextref"):
        out.append(
            InTextRef(
                reference_num=int(el.findtext("Reference")),
                exact=el.findtext("Exact", default=""),
                span=(int(el.findtext("Start")), int(el.findtext("End"))),
                prefix=el.findtext("Prefix", default=""),
                suffix=el.findtext("Suffix", default=""),
            )
        )
    return root.get("document", ""), out


def _parse(path_or_text) -> ET.Element:
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and not path_or_text.lstrip().startswith("<")):
        return ET.parse(path_or_text).getroot()
    return ET.fromstring(path_or_text)


def _refs_jsonl(doc: CitationDocument) -> str:
    rows = []
    for c in doc.references:
        r = c.ref
        rows.append(
            {
                "document": doc.doc_id,
                "num": r.num,
                "start": r.span[0],
                "end": r.span[1],
                "author": r.author,
                "title": r.title,
                "year": r.year,
                "handle": c.handle,
                "link_kind": c.link_kind,
                "raw": r.raw,
            }
        )
    return "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows)


def _intext_jsonl(doc: CitationDocument) -> str:
    return "".join(
        json.dumps(
            {
                "document": doc.doc_id,
                "reference": r.reference_num,
                "exact": r.exact,
                "start": r.start,
                "end": r.end,
                "prefix": r.prefix,
                "suffix": r.suffix,
            },
            ensure_ascii=False,
        )
        + "\n"
        for r in doc.intext
    )


def output_paths(out_dir, doc_id: str) -> dict[str, Path]:
    """``<out>/<collection>/<paper-id>-refs.xml`` and friends; doc_id is ``collection/paper-id``."""
    base = Path(out_dir) / doc_id
    return {
        "refs": base.with_name(base.name + "-refs.xml"),
        "intext": base.with_name(base.name + "-intext.xml"),
        "refs_jsonl": base.with_name(base.name + "-refs.jsonl"),
        "intext_jsonl": base.with_name(base.name + "-intext.jsonl"),
        "error": base.with_name(base.name + ".error.json"),
    }


def clear_outputs(out_dir, doc_id: str):
    for p in output_paths(out_dir, doc_id).values():
        if p.exists():
            p.unlink()


def write_outputs(doc: CitationDocument, out_dir) -> dict[str, Path]:
    """Write all four files; on failure nothing of this document is left behind."""
    paths = output_paths(out_dir, doc.doc_id)
    doc.check_spans()
    try:
        write_references_xml(doc, paths["refs"])
        write_intext_xml(doc, paths["intext"])
        _write(paths["refs_jsonl"], _refs_jsonl(doc))
        _write(paths["intext_jsonl"], _intext_jsonl(doc))
    except BaseException:
        clear_outputs(out_dir, doc.doc_id)
        raise
    if paths["error"].exists():
        paths["error"].unlink()
    return paths


def write_error_sidecar(out_dir, doc_id: str, stage: str, code: str, message: str) -> Path:
    clear_outputs(out_dir, doc_id)
    path = output_paths(out_dir, doc_id)["error"]
    body = {"document": doc_id, "status": "unprocessed", "stage": stage, "code": code, "message": message}
    _write(path, json.dumps(body, ensure_ascii=False, indent=2) + "\n")
    return path
