"""Command-line interface: ``cyrcite <subcommand> ...`` (or ``python -m cyrcite``).

Exit codes:
    0  success (including "nothing to do", e.g. an empty input directory)
    1  bad input data (unreadable/invalid file, unknown handle, ...)
    2  usage error (argparse)
    3  some documents could not be processed (``.error.json`` sidecars written)
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import Config
from .features import featurize_line
from .labeler import Model, evaluate, predict, prepare, train_sequences
from .lexicons import mine_candidate_names
from .linker import LinkError, MetadataCollection, UnlinkedRegistry, link_reference
from .normalize import ScriptClass, classify_script, repair_homoglyphs, tokenize
from .pipeline import Pipeline, StageError, document_id, find_documents, promote_in_tree, run_batch
from .ref_parser import ParsedReference, parse_reference
from .training_data import AnnotationError, LabeledSequence, load_annotations, parse_columns, render_corpus

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_UNPROCESSED = 3


class DataError(Exception):
    pass


def _config(args) -> Config:
    cfg = Config.load(args.config) if args.config else Config()
    return cfg.replace(
        seed_lexicon=getattr(args, "lexicon", None),
        jobs=getattr(args, "jobs", None),
    )


def _model(args) -> Model:
    return Model.load(args.model) if args.model else Model.default()


def _read_lines(path) -> list[str]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return [line.rstrip("\r") for line in text.split("\n") if line.strip()]


def _load_training(paths) -> list[LabeledSequence]:
    """``.tsv`` files hold token/label columns, anything else one ``<r>`` fragment per line."""
    seqs = []
    for p in paths:
        if str(p).endswith(".tsv"):
            seqs.extend(parse_columns(Path(p).read_text(encoding="utf-8")))
        else:
            seqs.extend(load_annotations(p))
    return seqs


def _write(out, text: str):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _ref_json(ref: ParsedReference, **extra) -> str:
    row = {"author": ref.author, "title": ref.title, "year": ref.year, "unparsed_tail": ref.unparsed_tail, "raw": ref.raw}
    row.update(extra)
    return json.dumps(row, ensure_ascii=False)


# subcommands ---------------------------------------------------------------


def cmd_train(args) -> int:
    cfg = _config(args)
    seqs = _load_training(args.annotations)
    if not seqs:
        raise DataError("no annotated references found")
    model = train_sequences(seqs, cfg.lexicons(), epochs=args.epochs, seed=args.seed, year_range=(cfg.year_min, cfg.year_max))
    model.save(args.out)
    print(f"trained on {len(seqs)} references, {len(model.features)} features -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_tag(args) -> int:
    cfg = _config(args)
    lex, model = cfg.lexicons(), _model(args)
    seqs = []
    for line in _read_lines(args.input):
        tokens, feats = featurize_line(line, lex, (cfg.year_min, cfg.year_max))
        texts = [t.text for t in tokens]
        seqs.append(predict(model, texts, feats).sequence(texts))
    _write(args.out, render_corpus(seqs) + ("\n" if seqs else ""))
    return EXIT_OK


def cmd_parse_refs(args) -> int:
    cfg = _config(args)
    lex, model = cfg.lexicons(), _model(args)
    yr = (cfg.year_min, cfg.year_max)
    out = [_ref_json(parse_reference(line, model, lex, yr)) + "\n" for line in _read_lines(args.input)]
    _write(args.out, "".join(out))
    return EXIT_OK


def _pipeline(args, cfg) -> Pipeline:
    return Pipeline.from_config(cfg, _model(args), args.collection, args.registry)


def cmd_process(args) -> int:
    cfg = _config(args)
    paths = find_documents(args.input)
    if not paths:
        return EXIT_OK
    pipe = _pipeline(args, cfg)
    base = Path(args.input) if Path(args.input).is_dir() else None
    failed = 0
    for path in paths:
        try:
            pipe.process(path, args.out, document_id(path, base))
        except StageError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            failed += 1
    return EXIT_UNPROCESSED if failed else EXIT_OK


def cmd_batch(args) -> int:
    cfg = _config(args)
    result = run_batch(_pipeline(args, cfg), args.input, args.out, jobs=cfg.jobs)
    print(f"processed {len(result.processed)}, failed {len(result.failed)}", file=sys.stderr)
    for doc_id, exc in result.failed.items():
        print(f"{doc_id}: {exc}", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_UNPROCESSED


def cmd_link(args) -> int:
    """Link parse-refs JSON lines against the collection; unlinked ones get temporary handles."""
    cfg = _config(args)
    table = cfg.lexicons().homoglyphs
    coll = MetadataCollection.load(args.collection, table)
    registry = UnlinkedRegistry(args.registry, prefix=cfg.handle_prefix, table=table) if args.registry else None
    out = []
    for lineno, line in enumerate(_read_lines(args.input), 1):
        try:
            row = json.loads(line)
            ref = ParsedReference(raw=row.get("raw", ""), author=row["author"], title=row["title"], year=row["year"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"{args.input}:{lineno}: bad reference record ({exc})") from None
        handle = link_reference(ref, coll, cfg.fuzzy_link, cfg.fuzzy_threshold)
        kind = "linked" if handle else None
        if not handle and registry is not None and ref.clean_title:
            entry = registry.register(ref)
            handle = entry.promoted_to or entry.temp_handle
            kind = "linked" if entry.promoted_to else "unlinked"
        out.append(_ref_json(ref, handle=handle, link_kind=kind) + "\n")
    _write(args.out, "".join(out))
    return EXIT_OK


def cmd_promote(args) -> int:
    cfg = _config(args)
    table = cfg.lexicons().homoglyphs
    registry = UnlinkedRegistry(args.registry, prefix=cfg.handle_prefix, table=table)
    coll = MetadataCollection.load(args.collection, table) if args.collection else None
    n = promote_in_tree(args.temp, args.real, registry, args.out, coll)
    print(f"{args.temp} -> {args.real}: {n} citation record(s) rewritten")
    return EXIT_OK


def cmd_mine_names(args) -> int:
    cfg = _config(args)
    lex = cfg.lexicons()
    corpus = _read_lines(args.corpus)
    mined = mine_candidate_names(corpus, lex.names, min_count=args.min_count or cfg.min_mined_count, table=lex.homoglyphs)
    mined.save(args.out)
    print(f"{len(lex.names)} seed -> {len(mined)} names", file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _config(args)
    lex, model = cfg.lexicons(), _model(args)
    yr = (cfg.year_min, cfg.year_max)
    if args.annotations:
        rows = [prepare(s, lex, yr) for s in _load_training(args.annotations)]
    else:
        rows = []
        for line in _read_lines(args.input):
            tokens, feats = featurize_line(line, lex, yr)
            rows.append(([t.text for t in tokens], feats))
    report, dump = evaluate(model, rows)
    _write(args.out, report.render(args.digits))
    if args.dump:
        Path(args.dump).write_text("".join(f"{t}\t{f}\t{c:.6f}\n" for t, f, c in dump), encoding="utf-8")
    return EXIT_OK


def line_is_cyrillic(line: str, table=None) -> bool:
    """True if at least one token is Cyrillic after homoglyph repair."""
    return any(
        classify_script(repair_homoglyphs(t.text, table)[0], table) is ScriptClass.CYRILLIC for t in tokenize(line)
    )


def cmd_stats(args) -> int:
    table = _config(args).lexicons().homoglyphs
    lines = _read_lines(args.corpus)
    non_cyr = sum(not line_is_cyrillic(line, table) for line in lines)
    print(f"lines\t{len(lines)}")
    print(f"non_cyrillic\t{non_cyr}")
    return EXIT_OK


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyrcite", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help, description=help)
        sp.set_defaults(func=fn)
        return sp

    def model_opt(sp):
        sp.add_argument("--model", help="model JSON (default: bundled model)")
        sp.add_argument("--lexicon", help="surname lexicon (default: bundled seed list)")

    sp = add("train", cmd_train, "train a labeler from annotation files")
    sp.add_argument("annotations", nargs="+", help="<r> fragment files (one per line) or .tsv column files")
    sp.add_argument("--out", required=True, help="model JSON to write")
    sp.add_argument("--epochs", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lexicon")

    sp = add("tag", cmd_tag, "label reference lines; prints token/label columns")
    sp.add_argument("input", help="file with one reference per line, or - for stdin")
    sp.add_argument("--out")
    model_opt(sp)

    sp = add("parse-refs", cmd_parse_refs, "parse reference lines into author/title/year JSON lines")
    sp.add_argument("input")
    sp.add_argument("--out")
    model_opt(sp)

    for name, fn, help in (
        ("process", cmd_process, "process one document (or every document in a directory)"),
        ("batch", cmd_batch, "process a directory tree with parallel extraction"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("input")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--collection", help="metadata collection (JSON lines)")
        sp.add_argument("--registry", help="unlinked-reference registry (JSON lines)")
        model_opt(sp)
        if name == "batch":
            sp.add_argument("--jobs", type=int, help="worker processes (default: CPU count)")

    sp = add("link", cmd_link, "link parse-refs output against a metadata collection")
    sp.add_argument("input")
    sp.add_argument("--collection", required=True)
    sp.add_argument("--registry")
    sp.add_argument("--out")

    sp = add("promote", cmd_promote, "replace a temporary handle by a real one in an output tree")
    sp.add_argument("temp")
    sp.add_argument("real")
    sp.add_argument("--registry", required=True)
    sp.add_argument("--out", required=True, help="output tree to rewrite")
    sp.add_argument("--collection", help="if given, the real handle must exist in it")

    sp = add("mine-names", cmd_mine_names, "grow the surname lexicon from a corpus of reference lines")
    sp.add_argument("corpus")
    sp.add_argument("--out", required=True)
    sp.add_argument("--lexicon", help="seed lexicon (default: bundled)")
    sp.add_argument("--min-count", type=int)

    sp = add("report", cmd_report, "per-field confidence table (count/mean/var/min/max)")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--annotations", nargs="+")
    src.add_argument("--input", help="plain reference lines")
    sp.add_argument("--out")
    sp.add_argument("--dump", help="also write token/field/confidence rows here")
    sp.add_argument("--digits", type=int, default=2)
    model_opt(sp)

    sp = add("stats", cmd_stats, "count lines and non-Cyrillic lines in a corpus")
    sp.add_argument("corpus")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DataError, LinkError, AnnotationError, ValueError, OSError) as exc:
        print(f"cyrcite {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
