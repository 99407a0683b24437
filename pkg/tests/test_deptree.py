import random
import sys
import textwrap

import pytest
from hypothesis import given, settings, strategies as st

from titlegen.deptree import (
    FIXTURE_DIR_ENV, CommandParser, FixtureParser, ParserConfig, detokenize, fixture_key,
    invoke_parser, make_parser, normalize_deprel, normalize_key_text, parse_conllu, preorder,
    serialize_conllu, write_fixture,
)
from titlegen.errors import (
    ConfigError, ConllUFormatError, FixtureNotFoundError, ParserUnavailableError, TreeStructureError,
)

from conftest import PARSES
from generators import random_tree

DEFICIT = "Market concerns about the deficit has hit the greenback."


def row(*cols):
    return "\t".join(str(c) for c in cols)


def test_single_token():
    (tree,) = parse_conllu("1\tYes\tyes\tINTJ\t_\t_\t0\troot\t_\t_\n")
    assert len(tree) == 1 and tree.root_id == 1 and preorder(tree) == [1]


def test_two_roots_rejected():
    text = row(1, "a", "a", "X", "_", "_", 0, "root", "_", "_") + "\n" + row(2, "b", "b", "X", "_", "_", 0, "root", "_", "_")
    with pytest.raises(TreeStructureError, match="root"):
        parse_conllu("# sent_id = s7\n" + text + "\n")


def test_cycle_rejected():
    lines = [row(1, "a", "a", "X", "_", "_", 0, "root", "_", "_"),
             row(2, "b", "b", "X", "_", "_", 3, "dep", "_", "_"),
             row(3, "c", "c", "X", "_", "_", 2, "dep", "_", "_")]
    with pytest.raises(TreeStructureError, match="s9"):
        parse_conllu("# sent_id = s9\n" + "\n".join(lines) + "\n")


def test_column_count_error_has_line_number():
    text = "# text = x y\n" + row(1, "x", "x", "X", "_", "_", 0, "root", "_", "_") + "\n2\ty\ty\n"
    with pytest.raises(ConllUFormatError) as err:
        parse_conllu(text)
    assert err.value.line_number == 3


def test_multiword_and_empty_nodes_skipped():
    text = "\n".join([
        row("1-2", "du", "_", "_", "_", "_", "_", "_", "_", "_"),
        row(1, "de", "de", "ADP", "_", "_", 2, "case", "_", "_"),
        row(2, "le", "le", "DET", "_", "_", 0, "root", "_", "_"),
        row("2.1", "x", "x", "X", "_", "_", "_", "_", "2:dep", "_"),
    ]) + "\n"
    (tree,) = parse_conllu(text)
    assert [n.form for n in tree.nodes] == ["de", "le"]


def test_relation_normalization():
    assert normalize_deprel("nsubj:pass") == "nsubjpass"
    assert normalize_deprel("obj") == "dobj"
    assert normalize_deprel("nmod:poss") == "nmod"
    assert normalize_deprel("obl:tmod") == "nmod"
    assert normalize_deprel("compound:prt") == "compound"
    assert normalize_deprel("aux:pass") == "auxpass"
    assert normalize_deprel("det") == "det"


def test_warned_tree(trees):
    tree = trees["warned"]
    root = tree.node(tree.root_id)
    assert root.form == "warned"
    triplets = set(tree.triplets())
    assert ("nsubj", "warned", "Microsoft") in triplets
    assert ("dobj", "warned", "users") in triplets
    assert ("compound", "users", "PC") in triplets
    assert preorder(tree)[0] == tree.root_id


def test_preorder_children_ascending():
    text = "\n".join([
        row(1, "r", "r", "X", "_", "_", 0, "root", "_", "_"),
        row(2, "a", "a", "X", "_", "_", 1, "dep", "_", "_"),
        row(3, "b", "b", "X", "_", "_", 2, "dep", "_", "_"),
        row(4, "c", "c", "X", "_", "_", 1, "dep", "_", "_"),
    ]) + "\n"
    (tree,) = parse_conllu(text)
    assert preorder(tree) == [1, 2, 3, 4]


def test_preorder_leaf_children():
    nodes = [row(i, f"w{i}", "_", "X", "_", "_", 0 if i == 1 else 1, "root" if i == 1 else "dep", "_", "_")
             for i in (1, 2, 3, 4, 5, 6, 7)]
    (tree,) = parse_conllu("\n".join(nodes) + "\n")
    assert preorder(tree) == [1, 2, 3, 4, 5, 6, 7]


def test_serialize_round_trip(trees):
    for tree in trees.values():
        (again,) = parse_conllu(serialize_conllu(tree))
        assert again == tree


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_random_tree_round_trip_and_shape(rng):
    tree = random_tree(rng)
    (again,) = parse_conllu(serialize_conllu(tree))
    assert again.nodes == tree.nodes
    order = preorder(tree)
    assert sorted(order) == [n.id for n in tree.nodes]
    assert sum(1 for n in tree.nodes if n.head) == len(tree) - 1
    assert tree.subtree(tree.root_id) == set(order)


def test_detokenize():
    assert detokenize(["Japan", "'s", "oldest", "studio"]) == "Japan's oldest studio"
    assert detokenize(["did", "n't", "go", ",", "really", "."]) == "didn't go, really."


def test_fixture_key_normalization():
    assert fixture_key(DEFICIT) == fixture_key("  Market concerns about the deficit   has hit the greenback ")
    assert normalize_key_text("Who?") == "Who"


def test_fixture_hit_and_miss(fixture_parser):
    tree = fixture_parser.parse(DEFICIT)
    assert tree.node(tree.root_id).form == "hit"
    assert DEFICIT in fixture_parser
    with pytest.raises(FixtureNotFoundError) as err:
        fixture_parser.parse("No such sentence anywhere")
    assert err.value.key == fixture_key("No such sentence anywhere")


def test_fixture_dir_missing(tmp_path):
    with pytest.raises(ConfigError):
        FixtureParser(tmp_path / "nope")


def test_write_fixture_then_lookup(tmp_path, trees):
    path = write_fixture(trees["warned"], tmp_path, "Microsoft  warned PC users to update their systems")
    assert path.name == fixture_key("Microsoft warned PC users to update their systems") + ".conllu"
    assert FixtureParser(tmp_path).parse("Microsoft warned PC users to update their systems").nodes == trees["warned"].nodes


def test_hash_named_file_without_text(tmp_path, trees):
    body = "\n".join(line for line in serialize_conllu(trees["pronoun"]).splitlines() if not line.startswith("#"))
    (tmp_path / f"{fixture_key('He won the game')}.conllu").write_text(body + "\n")
    assert FixtureParser(tmp_path).parse("He won the game").nodes == trees["pronoun"].nodes


def test_env_var_overrides_fixture_dir(monkeypatch):
    monkeypatch.setenv(FIXTURE_DIR_ENV, str(PARSES))
    tree = invoke_parser(DEFICIT, ParserConfig.from_spec("fixture:/does/not/exist"))
    assert tree.node(tree.root_id).form == "hit"


def test_parser_spec_errors(monkeypatch):
    monkeypatch.delenv(FIXTURE_DIR_ENV, raising=False)
    with pytest.raises(ConfigError):
        ParserConfig.from_spec("stanza")
    with pytest.raises(ConfigError):
        ParserConfig.from_spec("command:")
    with pytest.raises(ConfigError):
        make_parser(ParserConfig.from_spec("fixture:"))


FAKE_PARSER = textwrap.dedent('''
    import sys, time
    text = sys.stdin.read().strip()
    if text == "sleep":
        time.sleep(5)
    if text == "crash":
        sys.exit(3)
    words = text.rstrip(".").split()
    print("# text = " + text)
    for i, w in enumerate(words, 1):
        head, rel = (0, "root") if i == 1 else (1, "dep")
        print("\\t".join([str(i), w, w.lower(), "X", "_", "_", str(head), rel, "_", "_"]))
    print()
''')


@pytest.fixture
def fake_parser(tmp_path):
    script = tmp_path / "fake_parser.py"
    script.write_text(FAKE_PARSER)
    return [sys.executable, str(script)]


def test_command_parser(fake_parser):
    tree = CommandParser(fake_parser).parse("Stocks fell sharply.")
    assert [n.form for n in tree.nodes] == ["Stocks", "fell", "sharply"]
    assert tree.root_id == 1


def test_command_parser_failures(fake_parser, tmp_path):
    with pytest.raises(ParserUnavailableError, match="status 3"):
        CommandParser(fake_parser).parse("crash")
    with pytest.raises(ParserUnavailableError, match="timed out"):
        CommandParser(fake_parser, timeout=0.5).parse("sleep")
    with pytest.raises(ParserUnavailableError, match="not found"):
        CommandParser([str(tmp_path / "missing-binary")]).parse("x")


def test_command_mode_via_config(fake_parser):
    cfg = ParserConfig.from_spec("command:" + " ".join(fake_parser))
    assert cfg.mode == "command"
    assert len(invoke_parser("a b c", cfg)) == 3


def test_subtree_and_word_count(trees):
    tree = trees["daylewis"]
    assert tree.word_count == len(tree.word_ids)
    assert all(tree.node(i).is_word for i in tree.word_ids)
    rng = random.Random(0)
    nid = rng.choice([n.id for n in tree.nodes])
    assert nid in tree.subtree(nid)
