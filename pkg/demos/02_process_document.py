"""Run the whole pipeline on one PDF.js text-content document.

    python demos/02_process_document.py [out_dir]

Loads the fixture paper in tests/fixtures/docs/neicon, finds its reference
list, parses each entry, extracts bracketed in-text references with their
200-character contexts, links against a small metadata collection and
writes the XML/JSONL outputs.
"""
import sys
import tempfile
from collections import Counter
from pathlib import Path

from cyrcite import Config
from cyrcite.pipeline import Pipeline

ROOT = Path(__file__).resolve().parent.parent
DOC = ROOT / "tests" / "fixtures" / "docs" / "neicon" / "gordienko2010.json"
COLLECTION = ROOT / "tests" / "fixtures" / "collection.jsonl"

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="cyrcite-"))
registry = out / "registry.jsonl"

pipe = Pipeline.from_config(Config(), collection_path=COLLECTION, registry_path=registry)
doc = pipe.process(DOC, out)

print(f"document {doc.doc_id}: {len(doc.references)} references, {len(doc.intext)} in-text mentions\n")
for c in doc.references:
    r = c.ref
    print(f"[{r.num}] {r.author} | {r.clean_title} | {r.year}")
    print(f"     {c.link_kind or 'no title'}: {c.handle}")

# how often each reference is mentioned in the body
counts = Counter(m.reference_num for m in doc.intext)
print("\nmentions per reference:", dict(sorted(counts.items())))

print("\nfiles written:")
for p in sorted(out.rglob("*")):
    if p.is_file():
        print("  ", p.relative_to(out))
