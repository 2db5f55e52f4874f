"""Temporary handles and their promotion.

    python demos/03_link_and_promote.py

A reference that matches nothing in the metadata collection gets a
temporary handle from the unlinked registry.  When the cited work is later
deposited, ``promote_in_tree`` swaps the temporary handle for the real one
in every output file, and the registry remembers the mapping so the next
run links straight to the real handle.
"""
import tempfile
from pathlib import Path

from cyrcite import Config
from cyrcite.linker import MetadataCollection, MetadataRecord
from cyrcite.pipeline import Pipeline, promote_in_tree

ROOT = Path(__file__).resolve().parent.parent
DOC = ROOT / "tests" / "fixtures" / "docs" / "neicon" / "gordienko2010.json"

out = Path(tempfile.mkdtemp(prefix="cyrcite-"))
registry_path = out / "registry.jsonl"

# 1. no metadata at all: every titled reference is unlinked
pipe = Pipeline.from_config(Config(), registry_path=registry_path)
doc = pipe.process(DOC, out)
first = doc.references[0]
print(f"reference 1 -> {first.handle} ({first.link_kind})")

# 2. the work turns up in the archive under a real handle
real = "spz:neicon:hist:y:2010:i:1:p:1"
n = promote_in_tree(first.handle, real, pipe.registry, out)
print(f"promoted {first.handle} -> {real}: {n} reference(s) rewritten")
print("refs.xml now says:", [ln.strip() for ln in (out / "neicon" / "gordienko2010-refs.xml").read_text(encoding="utf-8").splitlines()
                             if real in ln][0][:120], "...")

# 3. a fresh run replays the registry and links directly
pipe2 = Pipeline.from_config(Config(), registry_path=registry_path)
doc2 = pipe2.process(DOC, out)
print(f"rerun: reference 1 -> {doc2.references[0].handle} ({doc2.references[0].link_kind})")

# 4. with a metadata record the linker needs no registry at all
rec = MetadataRecord(real, ("Гордиенко Э.А.",), first.ref.clean_title, "2010")
pipe3 = Pipeline.from_config(Config(), registry_path=out / "other.jsonl")
pipe3.collection = MetadataCollection([rec], pipe3.lexicons.homoglyphs)
print("direct link:", pipe3.link(pipe3.extract(DOC, "neicon/gordienko2010")).references[0].handle)
