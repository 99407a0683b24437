import io
import json
import sys

import pytest

from titlegen.cli import main
from titlegen.deptree import FixtureParser

from conftest import CORPUS, PARSES

DOLLAR = str(CORPUS / "business" / "dollar.txt")
FIXTURES = f"fixture:{PARSES}"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_title_from_file():
    code, out = run("title", "--in", DOLLAR, "--parser", FIXTURES)
    assert code == 0
    assert out == "Market concerns about deficit hit greenback\n"


def test_title_from_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(open(DOLLAR, encoding="utf-8").read()))
    assert run("title", "--parser", FIXTURES) == (0, "Market concerns about deficit hit greenback\n")


def test_title_corpus_jsonl(tmp_path):
    jsonl = tmp_path / "out.jsonl"
    code, out = run("title", "--corpus", str(CORPUS), "--parser", FIXTURES, "--jsonl", str(jsonl))
    assert code == 0 and len(out.splitlines()) == 5
    records = [json.loads(line) for line in jsonl.read_text().splitlines()]
    assert {r["category"] for r in records} == {"business", "entertainment", "politics", "sport", "tech"}
    assert all("verdict" in r for r in records)


def test_keywords_tsv():
    code, out = run("keywords", "--in", DOLLAR)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "phrase\tscore\tfreq"
    assert all(len(line.split("\t")) == 3 for line in lines)


def test_tree_debug():
    code, out = run("tree", "--in", DOLLAR, "--parser", FIXTURES)
    assert code == 0
    assert out.startswith("index\trank1\trank2\twords\ttext\n")
    assert "# title\tMarket concerns about deficit hit greenback" in out
    code, out = run("tree", "--sentence", "He won the game", "--parser", FIXTURES)
    assert code == 0 and "# title\tHe won game" in out


def test_eval_csv(tmp_path):
    csv_path = tmp_path / "report.csv"
    code, _ = run("eval", "--corpus", str(CORPUS), "--sample", "4", "--seed", "7",
                  "--parser", FIXTURES, "--csv", str(csv_path))
    assert code == 0
    header, *rows = csv_path.read_text().splitlines()
    assert header == "category,n,mean_f1_dtatg,mean_f1_tfidf"
    assert sum(int(r.split(",")[1]) for r in rows) == 4
    code, out = run("eval", "--corpus", str(CORPUS), "--sample", "4", "--seed", "7", "--parser", FIXTURES)
    assert out == csv_path.read_text()


def test_config_file(tmp_path):
    cfg = tmp_path / "t.cfg"
    cfg.write_text(f"parser = {FIXTURES}\n")
    assert run("title", "--in", DOLLAR, "--config", str(cfg))[0] == 0


def test_exit_codes(tmp_path, capsys):
    assert run("title", "--bogus")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("title", "--in", str(tmp_path / "missing.txt"), "--parser", FIXTURES)[0] == 1
    empty = tmp_path / "empty.txt"
    empty.write_text("  \n")
    assert run("title", "--in", str(empty), "--parser", FIXTURES)[0] == 1
    assert run("title", "--in", DOLLAR, "--parser", "stanza")[0] == 2
    assert run("title", "--in", DOLLAR, "--parser", f"fixture:{tmp_path / 'nowhere'}")[0] == 2
    unparsed = tmp_path / "new.txt"
    unparsed.write_text("Title\n\nA sentence nobody parsed. Another one.\n")
    assert run("title", "--in", str(unparsed), "--parser", FIXTURES)[0] == 2
    assert "titlegen:" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run("--help")[0] == 0
    assert "title" in capsys.readouterr().out


FAKE = """
import sys
text = sys.stdin.read().strip()
words = text.split()
print("# text = " + text)
for i, w in enumerate(words, 1):
    print("\\t".join([str(i), w, w.lower(), "NOUN", "_", "_", "0" if i == 1 else "1",
                     "root" if i == 1 else "nsubj", "_", "_"]))
print()
"""


def test_parse_cache(tmp_path):
    script = tmp_path / "fake.py"
    script.write_text(FAKE)
    out_dir = tmp_path / "cache"
    code, out = run("parse-cache", "--in", DOLLAR, "--parser", f"command:{sys.executable} {script}",
                    "--out", str(out_dir))
    assert code == 0 and out.endswith(f"parses written to {out_dir}\n")
    parser = FixtureParser(out_dir)
    assert "Market concerns about the deficit has hit the greenback" in parser
    assert run("title", "--in", DOLLAR, "--parser", f"fixture:{out_dir}")[0] == 0
    assert run("parse-cache", "--in", DOLLAR, "--parser", FIXTURES, "--out", str(out_dir))[0] == 2


@pytest.mark.parametrize("metric", ["freq", "degree", "ratio"])
def test_keyword_metrics(metric):
    code, out = run("keywords", "--in", DOLLAR, "--metric", metric, "--top", "3")
    assert code == 0 and len(out.splitlines()) == 4
