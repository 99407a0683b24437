"""Dependency trees: CoNLL-U reading/writing and external parser clients.

Relation labels are normalized to the Stanford-era vocabulary the pruning
rules are written against (``obj`` -> ``dobj``, ``nsubj:pass`` ->
``nsubjpass``, ``obl`` and ``nmod:*`` -> ``nmod``, ``compound:*`` ->
``compound``). The label as read is kept in ``DepNode.raw_deprel``.
"""

from __future__ import annotations

import hashlib
import logging
import os
import subprocess
import threading
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Optional

from .errors import (
    ConfigError,
    ConllUFormatError,
    FixtureNotFoundError,
    ParserUnavailableError,
    TreeStructureError,
)

log = logging.getLogger(__name__)

FIXTURE_DIR_ENV = "TITLEGEN_FIXTURE_DIR"

_KNOWN_LABELS = frozenset(
    """acl acl:relcl advcl advmod amod appos aux auxpass case cc cc:preconj ccomp
    clf compound conj cop csubj csubjpass dep det det:predet discourse dislocated
    dobj expl fixed flat flat:foreign flat:name goeswith iobj list mark neg nmod
    nsubj nsubjpass nummod orphan parataxis punct reparandum root vocative xcomp
    mwe name poss possessive prt""".split()
)
_drift_seen = set()


def normalize_deprel(label):
    label = label.strip()
    base = label.split(":", 1)[0]
    if label == "nsubj:pass":
        return "nsubjpass"
    if label == "csubj:pass":
        return "csubjpass"
    if label == "aux:pass":
        return "auxpass"
    if label == "obj":
        return "dobj"
    if base in ("nmod", "obl"):
        return "nmod"
    if base == "compound":
        return "compound"
    if label not in _KNOWN_LABELS and label not in _drift_seen:
        _drift_seen.add(label)
        log.info("relation label %r is outside the normalization table; kept as is", label)
    return label


@dataclass(frozen=True)
class DepNode:
    id: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str
    raw_deprel: str = ""
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    @property
    def is_punct(self):
        return self.upos == "PUNCT" or self.deprel == "punct"

    @property
    def is_clitic(self):
        # "'s", "n't": written without a space before them
        return self.form[:1] in ("'", "’") or self.form.lower() in ("n't", "n’t")

    @property
    def is_word(self):
        return not self.is_punct and not self.is_clitic

    @property
    def lower_forms(self):
        forms = {self.form.lower()}
        if self.lemma and self.lemma != "_":
            forms.add(self.lemma.lower())
        return forms


@dataclass(frozen=True)
class DependencyTree:
    nodes: tuple
    text: Optional[str] = None
    sent_id: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        self._validate()

    def _validate(self):
        label = self.sent_id or self.text or "<unnamed>"
        if not self.nodes:
            raise TreeStructureError(f"sentence {label}: empty tree")
        for i, node in enumerate(self.nodes, start=1):
            if node.id != i:
                raise TreeStructureError(f"sentence {label}: token ids must be 1..n, found {node.id} at {i}")
            if node.head < 0 or node.head > len(self.nodes):
                raise TreeStructureError(f"sentence {label}: token {node.id} has head {node.head} out of range")
            if node.head == node.id:
                raise TreeStructureError(f"sentence {label}: token {node.id} is its own head")
            if not node.deprel:
                raise TreeStructureError(f"sentence {label}: token {node.id} has an empty relation")
        roots = [n.id for n in self.nodes if n.head == 0]
        if len(roots) != 1:
            raise TreeStructureError(f"sentence {label}: expected exactly one root, found {len(roots)}")
        seen = set()
        stack = [roots[0]]
        while stack:
            nid = stack.pop()
            seen.add(nid)
            stack.extend(self.children[nid])
        if len(seen) != len(self.nodes):
            raise TreeStructureError(f"sentence {label}: cycle detected (tokens unreachable from root)")

    def __len__(self):
        return len(self.nodes)

    def node(self, node_id) -> DepNode:
        if not 1 <= node_id <= len(self.nodes):
            raise KeyError(node_id)
        return self.nodes[node_id - 1]

    @cached_property
    def root_id(self):
        return next(n.id for n in self.nodes if n.head == 0)

    @cached_property
    def children(self):
        kids = {n.id: [] for n in self.nodes}
        kids[0] = []
        for n in self.nodes:
            kids[n.head].append(n.id)
        return {k: tuple(sorted(v)) for k, v in kids.items()}

    def subtree(self, node_id):
        out = set()
        stack = [node_id]
        while stack:
            nid = stack.pop()
            out.add(nid)
            stack.extend(self.children[nid])
        return out

    @cached_property
    def word_ids(self):
        return tuple(n.id for n in self.nodes if n.is_word)

    @property
    def word_count(self):
        return len(self.word_ids)

    def triplets(self):
        """(relation, governor form, dependent form); governor of the root is ROOT."""
        out = []
        for n in self.nodes:
            gov = "ROOT" if n.head == 0 else self.node(n.head).form
            out.append((n.deprel, gov, n.form))
        return out

    @property
    def sentence_text(self):
        return self.text if self.text is not None else detokenize(n.form for n in self.nodes)


def detokenize(forms):
    out = []
    for form in forms:
        if out and (form[:1] in ("'", "’") or form.lower() in ("n't", "n’t")
                    or form in {",", ".", ":", ";", "?", "!", ")", "%"}):
            out[-1] += form
        else:
            out.append(form)
    return " ".join(out)


def preorder(tree: DependencyTree):
    """Root first, children in ascending token-id order."""
    order = []
    stack = [tree.root_id]
    while stack:
        nid = stack.pop()
        order.append(nid)
        stack.extend(reversed(tree.children[nid]))
    return order


def _parse_block(lines, first_line):
    nodes = []
    meta = {}
    for offset, line in enumerate(lines):
        lineno = first_line + offset
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                meta[key.strip()] = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConllUFormatError(f"expected 10 tab-separated columns, got {len(cols)}", lineno)
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue
        try:
            nid = int(tok_id)
            head = int(cols[6])
        except ValueError:
            raise ConllUFormatError(f"non-integer ID or HEAD ({cols[0]!r}, {cols[6]!r})", lineno) from None
        nodes.append(DepNode(
            id=nid, form=cols[1], lemma=cols[2], upos=cols[3], head=head,
            deprel=normalize_deprel(cols[7]), raw_deprel=cols[7],
            xpos=cols[4], feats=cols[5], deps=cols[8], misc=cols[9],
        ))
    if not nodes:
        return None
    return DependencyTree(tuple(nodes), text=meta.get("text"), sent_id=meta.get("sent_id"))


def parse_conllu(text):
    """All trees in a CoNLL-U string."""
    trees = []
    block, start = [], 1
    for lineno, line in enumerate(text.splitlines() + [""], start=1):
        line = line.rstrip("\r\n")
        if line.strip():
            if not block:
                start = lineno
            block.append(line)
            continue
        if block:
            tree = _parse_block(block, start)
            if tree is not None:
                trees.append(tree)
            block = []
    return trees


def serialize_conllu(trees):
    if isinstance(trees, DependencyTree):
        trees = [trees]
    out = []
    for tree in trees:
        if tree.sent_id is not None:
            out.append(f"# sent_id = {tree.sent_id}")
        if tree.text is not None:
            out.append(f"# text = {tree.text}")
        for n in tree.nodes:
            rel = n.raw_deprel or n.deprel
            out.append("\t".join([
                str(n.id), n.form, n.lemma, n.upos, n.xpos, n.feats,
                str(n.head), rel, n.deps, n.misc,
            ]))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


# -- parser clients ---------------------------------------------------------

def normalize_key_text(text):
    """Whitespace-collapsed text without a trailing sentence delimiter."""
    return " ".join(text.split()).rstrip(".?!:").rstrip()


def fixture_key(text):
    return hashlib.sha256(normalize_key_text(text).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ParserConfig:
    mode: str = "fixture"  # "fixture" or "command"
    command: tuple = ()
    timeout: float = 30.0
    fixture_dir: Optional[str] = None
    pool_size: int = 1

    @classmethod
    def from_spec(cls, spec, timeout=30.0, pool_size=1):
        """``fixture:<dir>`` or ``command:<argv...>`` (argv split on whitespace)."""
        mode, _, rest = spec.partition(":")
        if mode == "fixture":
            return cls("fixture", fixture_dir=rest or None, timeout=timeout, pool_size=pool_size)
        if mode == "command":
            if not rest.strip():
                raise ConfigError("command parser needs an argv after 'command:'")
            return cls("command", command=tuple(rest.split()), timeout=timeout, pool_size=pool_size)
        raise ConfigError(f"parser spec must start with 'fixture:' or 'command:', got {spec!r}")

    def resolved_fixture_dir(self):
        return os.environ.get(FIXTURE_DIR_ENV) or self.fixture_dir


class FixtureParser:
    """Looks parses up in a directory of ``.conllu`` files.

    Trees are indexed by the SHA-256 of their normalized ``# text`` comment;
    a file named ``<sha256>.conllu`` without a text comment is indexed by its
    stem.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise ConfigError(f"fixture directory {self.directory} does not exist")
        self.index = {}
        for path in sorted(self.directory.rglob("*.conllu")):
            trees = parse_conllu(path.read_text(encoding="utf-8"))
            for tree in trees:
                if tree.text is not None:
                    key = fixture_key(tree.text)
                elif len(trees) == 1:
                    key = path.stem
                else:
                    log.warning("%s: tree without '# text' comment ignored", path)
                    continue
                self.index.setdefault(key, tree)

    def __contains__(self, text):
        return fixture_key(text) in self.index

    def parse(self, text):
        key = fixture_key(text)
        try:
            return self.index[key]
        except KeyError:
            raise FixtureNotFoundError(key, normalize_key_text(text)) from None


class CommandParser:
    """Runs an external parser: sentence on stdin, CoNLL-U on stdout."""

    def __init__(self, command, timeout=30.0, pool_size=1):
        if not command:
            raise ConfigError("empty parser command")
        self.command = list(command)
        self.timeout = timeout
        self._slots = threading.BoundedSemaphore(max(1, pool_size))

    def raw(self, text):
        with self._slots:
            try:
                proc = subprocess.run(
                    self.command, input=text + "\n", capture_output=True,
                    text=True, timeout=self.timeout, encoding="utf-8",
                )
            except FileNotFoundError as exc:
                raise ParserUnavailableError(f"parser command not found: {exc}") from exc
            except subprocess.TimeoutExpired as exc:
                raise ParserUnavailableError(f"parser timed out after {self.timeout}s") from exc
        if proc.returncode != 0:
            raise ParserUnavailableError(
                f"parser exited with status {proc.returncode}: {proc.stderr.strip()[:200]}"
            )
        return proc.stdout

    def parse(self, text):
        trees = parse_conllu(self.raw(text))
        if not trees:
            raise ParserUnavailableError("parser produced no CoNLL-U sentence")
        tree = trees[0]
        if tree.text is None:
            tree = DependencyTree(tree.nodes, text=" ".join(text.split()), sent_id=tree.sent_id)
        return tree


@lru_cache(maxsize=16)
def _fixture_parser(directory):
    return FixtureParser(directory)


def make_parser(config: ParserConfig):
    if config.mode == "fixture":
        directory = config.resolved_fixture_dir()
        if not directory:
            raise ConfigError(f"fixture mode needs a directory (or ${FIXTURE_DIR_ENV})")
        return _fixture_parser(str(Path(directory).resolve()))
    if config.mode == "command":
        return CommandParser(config.command, config.timeout, config.pool_size)
    raise ConfigError(f"unknown parser mode {config.mode!r}")


def invoke_parser(sentence_text, parser_config: ParserConfig):
    return make_parser(parser_config).parse(sentence_text)


def write_fixture(tree, directory, text=None):
    """Store ``tree`` as ``<directory>/<sha256>.conllu``; returns the path."""
    text = " ".join((text if text is not None else tree.sentence_text).split())
    if tree.text != text:
        tree = DependencyTree(tree.nodes, text=text, sent_id=tree.sent_id)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{fixture_key(text)}.conllu"
    path.write_text(serialize_conllu(tree), encoding="utf-8")
    return path
