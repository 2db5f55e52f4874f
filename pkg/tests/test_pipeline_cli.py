import filecmp
import json
import random
import shutil

import pytest

from conftest import FIXTURES
from cyrcite.cli import main
from cyrcite.config import Config
from cyrcite.pipeline import OutputTreeStore, Pipeline, StageError, document_id, run_batch
from cyrcite.testing import document_json, synthetic_pages

DOCS = FIXTURES / "docs"
COLLECTION = FIXTURES / "collection.jsonl"


@pytest.fixture()
def pipeline(tmp_path, model):
    return Pipeline.from_config(Config(), model, COLLECTION, tmp_path / "registry.jsonl")


def outputs(root):
    return sorted(p.relative_to(root).as_posix() for p in root.rglob("*") if p.is_file())


def test_document_id(tmp_path):
    assert document_id(DOCS / "cris" / "cris2016.json") == "cris/cris2016"
    assert document_id(DOCS / "cris" / "cris2016.json", DOCS) == "cris/cris2016"
    assert document_id(DOCS / "cris" / "cris2016.json", DOCS / "cris") == "cris/cris2016"


def test_process_fixture_has_examples(pipeline, tmp_path):
    doc = pipeline.process(DOCS / "cris" / "cris2016.json", tmp_path / "out")
    ref4 = doc.references[3]
    assert ref4.ref.num == 4 and ref4.handle == "RePEc:rus:mqijxk:34"
    assert any(r.reference_num == 4 and r.exact == "[4]" for r in doc.intext)
    xml = (tmp_path / "out" / "cris" / "cris2016-refs.xml").read_text()
    assert 'handle="RePEc:rus:mqijxk:34"' in xml


def test_no_text_layer_stage(pipeline, tmp_path):
    with pytest.raises(StageError) as info:
        pipeline.process(FIXTURES / "bad" / "empty.json", tmp_path / "out")
    assert (info.value.stage, info.value.code) == ("load", "NoTextLayer")
    assert outputs(tmp_path / "out") == ["bad/empty.error.json"]


def test_segment_failure_stage(pipeline, tmp_path):
    p = tmp_path / "in" / "x.json"
    p.parent.mkdir()
    p.write_text(json.dumps(document_json([["no references", "at all"]])), encoding="utf-8")
    with pytest.raises(StageError) as info:
        pipeline.process(p, tmp_path / "out")
    assert (info.value.stage, info.value.code) == ("segment", "NoReferenceSection")


def test_stage_error_validates_and_pickles():
    import pickle

    with pytest.raises(ValueError):
        StageError("bogus", "X", "y")
    e = pickle.loads(pickle.dumps(StageError("load", "BrokenStructure", "m")))
    assert (e.stage, e.code, e.message) == ("load", "BrokenStructure", "m")


def make_batch(root, n=4):
    rng = random.Random(9)
    for k in range(n):
        pages = synthetic_pages(rng, n_pages=2, lines_per_page=30, n_refs=6)
        d = root / f"coll{k % 2}"
        d.mkdir(parents=True, exist_ok=True)
        (d / f"doc{k}.json").write_text(json.dumps(document_json(pages, rng), ensure_ascii=False), encoding="utf-8")
    shutil.copy(FIXTURES / "bad" / "corrupt.json", root / "coll0" / "zz-corrupt.json")


def test_batch_one_corrupt(tmp_path, model):
    make_batch(tmp_path / "in")
    pipe = Pipeline.from_config(Config(), model, COLLECTION, tmp_path / "reg.jsonl")
    result = run_batch(pipe, tmp_path / "in", tmp_path / "out", jobs=1)
    assert len(result.processed) == 4 and list(result.failed) == ["coll0/zz-corrupt"]
    assert result.failed["coll0/zz-corrupt"].code == "BrokenStructure"
    files = outputs(tmp_path / "out")
    assert len([f for f in files if f.endswith("-refs.xml")]) == 4
    assert [f for f in files if "zz-corrupt" in f] == ["coll0/zz-corrupt.error.json"]


def test_batch_parallel_equals_sequential(tmp_path, model):
    make_batch(tmp_path / "in")
    runs = []
    for jobs in (1, 2):
        out = tmp_path / f"out{jobs}"
        pipe = Pipeline.from_config(Config(), model, COLLECTION, tmp_path / f"reg{jobs}.jsonl")
        run_batch(pipe, tmp_path / "in", out, jobs=jobs)
        runs.append(out)
    assert outputs(runs[0]) == outputs(runs[1])
    for rel in outputs(runs[0]):
        assert filecmp.cmp(runs[0] / rel, runs[1] / rel, shallow=False), rel


def test_cli_batch_twice_identical(tmp_path):
    make_batch(tmp_path / "in")
    args = ["batch", str(tmp_path / "in"), "--collection", str(COLLECTION), "--registry", str(tmp_path / "reg.jsonl"), "--jobs", "1"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 3
    assert main(args + ["--out", str(tmp_path / "b")]) == 3
    for rel in outputs(tmp_path / "a"):
        assert filecmp.cmp(tmp_path / "a" / rel, tmp_path / "b" / rel, shallow=False), rel


def test_cli_process_empty_dir(tmp_path):
    (tmp_path / "empty").mkdir()
    assert main(["process", str(tmp_path / "empty"), "--out", str(tmp_path / "out")]) == 0
    assert not (tmp_path / "out").exists()


def test_cli_process_failure_exit_code(tmp_path):
    assert main(["process", str(FIXTURES / "bad" / "corrupt.json"), "--out", str(tmp_path)]) == 3
    assert (tmp_path / "bad" / "corrupt.error.json").exists()


def test_cli_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_cli_stats(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("Иванов И.И. Труды. 2001\nSmith J. Works. 2002\nPetrov P. Trudy [Петров П. Труды]\n\n2003\n", encoding="utf-8")
    assert main(["stats", str(corpus)]) == 0
    assert capsys.readouterr().out == "lines\t4\nnon_cyrillic\t2\n"


def test_cli_tag_and_parse(tmp_path, capsys):
    lines = tmp_path / "refs.txt"
    lines.write_text("Гордиенко Э.А. Варлаам Хутынский и архиепископ Антоний в житиях и мистериях XII-XVI века. – М.; СПб., 2010.\n", encoding="utf-8")
    assert main(["tag", str(lines)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Гордиенко\tB-A\nЭ.А.\tI-A\nВарлаам\tB-T\n")
    assert main(["parse-refs", str(lines), "--out", str(tmp_path / "p.jsonl")]) == 0
    row = json.loads((tmp_path / "p.jsonl").read_text())
    assert row["year"] == "2010" and row["author"] == "Гордиенко Э.А."
    assert main(["link", str(tmp_path / "p.jsonl"), "--collection", str(COLLECTION), "--registry", str(tmp_path / "r.jsonl"),
                 "--out", str(tmp_path / "l.jsonl")]) == 0
    assert json.loads((tmp_path / "l.jsonl").read_text())["handle"] == "spz:cyrkitec:references:1"


def test_cli_train_report_mine(tmp_path, capsys):
    ann = tmp_path / "a.txt"
    ann.write_text("<r><a>Иванов И.И.</a> <t>Экономика труда.</t> – М., <y>2001.</y></r>\n", encoding="utf-8")
    assert main(["train", str(ann), "--out", str(tmp_path / "m.json"), "--epochs", "5"]) == 0
    assert main(["report", "--annotations", str(ann), "--model", str(tmp_path / "m.json")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "field\tcount\tmean\tvar\tmin\tmax" and [l[0] for l in out[1:]] == list("AOTY")
    corpus = tmp_path / "c.txt"
    corpus.write_text("Иванов И.И., Сидорчук П.П. Экономика. 2001\n", encoding="utf-8")
    assert main(["mine-names", str(corpus), "--out", str(tmp_path / "names.txt")]) == 0
    assert "Сидорчук\tmined" in (tmp_path / "names.txt").read_text()


def test_cli_bad_data_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("<r><a>oops</r>\n", encoding="utf-8")
    assert main(["train", str(bad), "--out", str(tmp_path / "m.json")]) == 1


def test_cli_promote_rewrites_tree(tmp_path):
    reg = tmp_path / "reg.jsonl"
    out = tmp_path / "out"
    assert main(["process", str(DOCS), "--out", str(out), "--collection", str(COLLECTION), "--registry", str(reg)]) == 0
    temp = "spz:cyrkitec:references:1"
    store = OutputTreeStore(out)
    before = {p: p.read_text() for p in out.rglob("*-refs.xml")}
    n = store.count(temp)
    assert n >= 1
    assert main(["promote", temp, "RePEc:new:1", "--registry", str(reg), "--out", str(out)]) == 0
    assert store.count(temp) == 0 and store.count("RePEc:new:1") == n
    for p, old in before.items():
        # only handle attributes changed
        assert old.replace(f'handle="{temp}"', 'handle="RePEc:new:1"') == p.read_text()
    assert main(["promote", temp, "RePEc:new:1", "--registry", str(reg), "--out", str(out)]) == 1


def test_config_roundtrip_and_override(tmp_path):
    cfg = Config(context_width=50)
    p = tmp_path / "c.json"
    cfg.save(p)
    assert Config.load(p) == cfg
    p.write_text('{"version": 1, "bogus": 1}')
    with pytest.raises(ValueError):
        Config.load(p)
