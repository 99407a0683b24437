"""Corpus loading (BBC-style ``<root>/<category>/*.txt``) and stopword lists."""

from __future__ import annotations

import json
import logging
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import ConfigError, InputError

log = logging.getLogger(__name__)

TYPE1, TYPE2 = "type1", "type2"
TYPE2_CATEGORIES = frozenset({"sport"})


@dataclass(frozen=True)
class Document:
    id: str
    body: str
    category: str = ""
    reference_title: Optional[str] = None
    doc_type_hint: Optional[str] = None

    def __post_init__(self):
        if not self.body.strip():
            raise InputError(f"document {self.id!r} has an empty body")


@dataclass
class Corpus:
    documents: list = field(default_factory=list)
    stopwords: frozenset = frozenset()

    def __post_init__(self):
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise InputError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def categories(self):
        return sorted({d.category for d in self.documents})


def normalize_text(text):
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return unicodedata.normalize("NFC", text)


def default_doc_type(category, type2_categories=TYPE2_CATEGORIES):
    return TYPE2 if category in type2_categories else TYPE1


def document_from_text(doc_id, text, category="", with_title=True, type2_categories=TYPE2_CATEGORIES):
    """Build a Document; when ``with_title`` the first non-empty line is the title."""
    text = normalize_text(text)
    title = None
    body = text
    if with_title:
        lines = text.split("\n")
        for i, line in enumerate(lines):
            if line.strip():
                title = line.strip()
                body = "\n".join(lines[i + 1:])
                break
    body = body.strip()
    return Document(
        id=doc_id,
        body=body,
        category=category,
        reference_title=title,
        doc_type_hint=default_doc_type(category, type2_categories),
    )


def _read_text(path):
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        log.warning("skipping %s: not valid UTF-8 (%s)", path, exc)
        return None


def load_corpus(root_path, layout="bbc_dirs", stopwords=frozenset(), type2_categories=TYPE2_CATEGORIES):
    root = Path(root_path)
    if not root.is_dir():
        raise OSError(f"corpus root {root} is not a readable directory")
    documents = []
    if layout == "bbc_dirs":
        for category_dir in sorted(p for p in root.iterdir() if p.is_dir()):
            for path in sorted(category_dir.glob("*.txt")):
                text = _read_text(path)
                if text is None or not text.strip():
                    continue
                try:
                    doc = document_from_text(
                        f"{category_dir.name}/{path.stem}", text, category_dir.name,
                        with_title=True, type2_categories=type2_categories,
                    )
                except InputError:
                    log.warning("skipping %s: no body after the title line", path)
                    continue
                documents.append(doc)
    elif layout == "flat":
        for path in sorted(root.glob("*.txt")):
            text = _read_text(path)
            if text is None or not text.strip():
                continue
            documents.append(document_from_text(path.stem, text, "", with_title=False))
    else:
        raise ConfigError(f"unknown corpus layout {layout!r}")
    return Corpus(documents, frozenset(stopwords))


def parse_stopwords(lines):
    words = set()
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return frozenset(words)


def load_stopwords(path=None):
    """Lowercased stopword set; ``None`` loads the bundled English list."""
    if path is None:
        text = resources.files("titlegen").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    else:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"stopword file {path} does not exist")
        text = path.read_text(encoding="utf-8")
    words = parse_stopwords(text.splitlines())
    if not words:
        log.warning("stopword list %s is empty", path)
    return words


def write_jsonl(records, path_or_handle):
    """One JSON object per line; accepts a path or an open text handle."""
    if hasattr(path_or_handle, "write"):
        for rec in records:
            path_or_handle.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        return
    with open(path_or_handle, "w", encoding="utf-8") as fh:
        write_jsonl(records, fh)
