"""Regenerate tests/golden/ from the fixture documents with the bundled model.

    python tools/make_golden.py

Runs ``cyrcite process`` on tests/fixtures/docs with a fresh registry and
copies the XML outputs.  Only rerun after an intended behaviour change.
"""
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from cyrcite.cli import main  # noqa: E402


def run():
    fixtures = ROOT / "tests" / "fixtures"
    golden = ROOT / "tests" / "golden"
    with tempfile.TemporaryDirectory() as tmp:
        code = main([
            "process", str(fixtures / "docs"), "--out", f"{tmp}/out",
            "--collection", str(fixtures / "collection.jsonl"), "--registry", f"{tmp}/registry.jsonl",
        ])
        if code:
            raise SystemExit(f"process failed with exit code {code}")
        if golden.exists():
            shutil.rmtree(golden)
        for xml in sorted(Path(tmp, "out").rglob("*.xml")):
            dest = golden / xml.relative_to(Path(tmp, "out"))
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(xml, dest)
            print(dest.relative_to(ROOT))


if __name__ == "__main__":
    run()
