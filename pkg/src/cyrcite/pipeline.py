"""Per-document processing: load -> linearize -> segment -> parse -> intext -> link -> serialize.

Every failure is reported as a :class:`StageError` naming the stage it
happened in; the document then gets an ``.error.json`` sidecar and no
partial outputs.  Batches run the extraction stages in parallel and the
link/serialize stages sequentially in sorted document order, so outputs
and temporary-handle numbering do not depend on the worker count.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .config import Config
from .docingest import DocumentError, linearize, load_document, segment_references
from .intext import extract_intext_refs
from .labeler import Model
from .lexicons import Lexicons
from .linker import CitationStore, MetadataCollection, UnlinkedRegistry, link_reference, promote
from .ref_parser import parse_reference
from .serialize import CitationDocument, CitedReference, write_error_sidecar, write_outputs

log = logging.getLogger(__name__)

STAGES = ("load", "linearize", "segment", "parse", "intext", "link", "serialize")

__all__ = [
    "STAGES",
    "StageError",
    "Pipeline",
    "BatchResult",
    "document_id",
    "find_documents",
    "process_document",
    "run_batch",
    "OutputTreeStore",
    "promote_in_tree",
]


class StageError(Exception):
    def __init__(self, stage: str, code: str, message: str):
        if stage not in STAGES:
            raise ValueError(f"unknown stage {stage!r}")
        super().__init__(f"{stage}: {code}: {message}")
        self.stage = stage
        self.code = code
        self.message = message

    def __reduce__(self):
        return StageError, (self.stage, self.code, self.message)


def document_id(path, root=None) -> str:
    """``collection/paper-id``: the parent directory name and the file stem."""
    path = Path(path)
    if root is not None:
        rel = path.relative_to(root).with_suffix("")
        if len(rel.parts) > 1:
            return rel.as_posix()
        return f"{Path(root).resolve().name}/{rel.name}"
    return f"{path.resolve().parent.name}/{path.stem}"


def find_documents(root) -> list[Path]:
    root = Path(root)
    if root.is_file():
        return [root]
    return sorted(p for p in root.rglob("*.json") if p.is_file())


def _stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except DocumentError as exc:
        raise StageError(stage, exc.code, str(exc)) from exc
    except OSError as exc:
        raise StageError(stage, "IOError", str(exc)) from exc
    except Exception as exc:  # anything else is a bug surfaced per document
        raise StageError(stage, type(exc).__name__, str(exc)) from exc


@dataclass
class Pipeline:
    model: Model
    lexicons: Lexicons
    config: Config = field(default_factory=Config)
    collection: MetadataCollection = field(default_factory=MetadataCollection)
    registry: UnlinkedRegistry = field(default_factory=UnlinkedRegistry)

    @classmethod
    def from_config(cls, config: Config, model: Optional[Model] = None, collection_path=None, registry_path=None):
        lexicons = config.lexicons()
        collection = (
            MetadataCollection.load(collection_path, lexicons.homoglyphs)
            if collection_path
            else MetadataCollection(table=lexicons.homoglyphs)
        )
        registry = UnlinkedRegistry(registry_path, prefix=config.handle_prefix, table=lexicons.homoglyphs)
        return cls(model or Model.default(), lexicons, config, collection, registry)

    @property
    def year_range(self) -> tuple[int, int]:
        return (self.config.year_min, self.config.year_max)

    def extract(self, path, doc_id: str) -> CitationDocument:
        """Stages load .. intext; no shared state is touched."""
        cfg = self.config
        items = _stage("load", load_document, path)
        text = _stage("linearize", linearize, items, cfg.line_tolerance)
        section, entries = _stage("segment", segment_references, text, cfg.headings)

        def parse_all():
            return [
                parse_reference(e.raw, self.model, self.lexicons, self.year_range, num=e.num, span=e.span)
                for e in entries
            ]

        refs = _stage("parse", parse_all)
        intext = _stage(
            "intext",
            extract_intext_refs,
            text,
            section,
            len(entries),
            cfg.context_width,
            cfg.expand_brackets,
        )
        return CitationDocument(doc_id, [CitedReference(r) for r in refs], intext, text=text.text)

    def link(self, doc: CitationDocument) -> CitationDocument:
        def link_all():
            for c in doc.references:
                if not c.ref.clean_title:
                    continue
                handle = link_reference(c.ref, self.collection, self.config.fuzzy_link, self.config.fuzzy_threshold)
                if handle:
                    c.handle, c.link_kind = handle, "linked"
                    continue
                entry = self.registry.register(c.ref)
                if entry.promoted_to:
                    c.handle, c.link_kind = entry.promoted_to, "linked"
                else:
                    c.handle, c.link_kind = entry.temp_handle, "unlinked"
            return doc

        return _stage("link", link_all)

    def write(self, doc: CitationDocument, out_dir) -> dict:
        return _stage("serialize", write_outputs, doc, out_dir)

    def process(self, path, out_dir, doc_id: Optional[str] = None) -> CitationDocument:
        """Run every stage on one document; raises StageError after writing the sidecar."""
        doc_id = doc_id or document_id(path)
        try:
            doc = self.extract(path, doc_id)
            self.link(doc)
            self.write(doc, out_dir)
        except StageError as exc:
            write_error_sidecar(out_dir, doc_id, exc.stage, exc.code, exc.message)
            raise
        return doc


def process_document(path, pipeline: Pipeline, out_dir, doc_id: Optional[str] = None) -> CitationDocument:
    return pipeline.process(path, out_dir, doc_id)


@dataclass
class BatchResult:
    processed: list[str] = field(default_factory=list)
    failed: dict[str, StageError] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failed


_WORKER: Optional[Pipeline] = None


def _init_worker(model: Model, lexicons: Lexicons, config: Config):
    # workers only extract; the collection and registry stay in the parent
    global _WORKER
    _WORKER = Pipeline(model, lexicons, config)


def _extract_job(job):
    path, doc_id = job
    try:
        return _WORKER.extract(path, doc_id)
    except StageError as exc:
        return exc


def run_batch(pipeline: Pipeline, root, out_dir, jobs: Optional[int] = None) -> BatchResult:
    """Process every ``*.json`` document under ``root``.

    Extraction is fanned out over ``jobs`` worker processes; linking and
    writing happen here, one document at a time in sorted order.
    """
    paths = find_documents(root)
    base = Path(root) if Path(root).is_dir() else None
    work = [(p, document_id(p, base)) for p in paths]
    jobs = jobs or pipeline.config.jobs or os.cpu_count() or 1
    jobs = max(1, min(jobs, len(work)))
    if jobs == 1:
        extracted = []
        for path, doc_id in work:
            try:
                extracted.append(pipeline.extract(path, doc_id))
            except StageError as exc:
                extracted.append(exc)
    else:
        init = (pipeline.model, pipeline.lexicons, pipeline.config)
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=init) as pool:
            extracted = list(pool.map(_extract_job, work, chunksize=4))

    result = BatchResult()
    for (path, doc_id), doc in zip(work, extracted):
        try:
            if isinstance(doc, StageError):
                raise doc
            pipeline.link(doc)
            pipeline.write(doc, out_dir)
            result.processed.append(doc_id)
        except StageError as exc:
            write_error_sidecar(out_dir, doc_id, exc.stage, exc.code, exc.message)
            result.failed[doc_id] = exc
            log.warning("%s: %s", path, exc)
    return result


class OutputTreeStore(CitationStore):
    """Citation records held in an output tree (``*-refs.xml`` + ``*-refs.jsonl``).

    ``rewrite`` edits the files in place, replacing the ``handle`` attribute
    of exactly those references that carry the old handle.
    """

    def __init__(self, out_dir):
        super().__init__()
        self.out_dir = Path(out_dir)

    def _xml_files(self):
        return sorted(self.out_dir.rglob("*-refs.xml"))

    def count(self, handle: str) -> int:
        needle = f'handle="{_xml_attr(handle)}"'
        return sum(p.read_text(encoding="utf-8").count(needle) for p in self._xml_files())

    def rewrite(self, old: str, new: str) -> int:
        needle = f'handle="{_xml_attr(old)}"'
        replacement = f'handle="{_xml_attr(new)}"'
        total = 0
        for xml_path in self._xml_files():
            text = xml_path.read_text(encoding="utf-8")
            n = text.count(needle)
            if not n:
                continue
            _replace_file(xml_path, text.replace(needle, replacement))
            total += n
            jsonl = xml_path.with_name(xml_path.name[: -len("-refs.xml")] + "-refs.jsonl")
            if jsonl.exists():
                rows = [json.loads(line) for line in jsonl.read_text(encoding="utf-8").splitlines() if line.strip()]
                for row in rows:
                    if row.get("handle") == old:
                        row["handle"], row["link_kind"] = new, "linked"
                _replace_file(jsonl, "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows))
        return total


def _xml_attr(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _replace_file(path: Path, content: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8", newline="")
    os.replace(tmp, path)


def promote_in_tree(temp_handle, real_handle, registry, out_dir, collection=None) -> int:
    return promote(temp_handle, real_handle, registry, OutputTreeStore(out_dir), collection)
