"""Rule-based sentence, token and clause segmentation.

Sentences end at any of ``. ? ! : \\n``. Commas never end a sentence; they
separate clauses instead. A ``.`` or ``:`` sitting between two digits
(``19.9``, ``10:30``) is part of a number and does not split.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

SENTENCE_DELIMITERS = frozenset(".?!:\n")

# Punctuation peeled off the edges of whitespace-delimited chunks.
_EDGE_PUNCT = set("""!"#$%&()*+,./:;<=>?@[\\]^_`{|}~'-""") | set("‘’“”–—…«»")

DEFAULT_ABBREVIATIONS = frozenset(
    {"mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "inc", "ltd", "co", "corp"}
)


@dataclass(frozen=True)
class SurfaceToken:
    position: int
    text: str
    is_word: bool
    start: int = 0
    end: int = 0


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    tokens: tuple = ()
    clauses: tuple = ()

    @property
    def words(self):
        return [t for t in self.tokens if t.is_word]

    @property
    def word_count(self):
        return sum(1 for t in self.tokens if t.is_word)

    def span_text(self, span):
        start, end = span
        return self.text[self.tokens[start].start:self.tokens[end - 1].end]


def is_word_text(text):
    return any(ch.isalnum() for ch in text)


def tokenize(sentence_text):
    """Whitespace split, then peel punctuation off both ends of every chunk.

    Interior punctuation stays (``e-mail``, ``19.9``, ``Japan's``).
    """
    tokens = []
    for m in re.finditer(r"\S+", sentence_text):
        chunk, base = m.group(), m.start()
        lo, hi = 0, len(chunk)
        head = []
        while lo < hi and chunk[lo] in _EDGE_PUNCT:
            head.append((chunk[lo], base + lo, base + lo + 1))
            lo += 1
        tail = []
        while hi > lo and chunk[hi - 1] in _EDGE_PUNCT:
            # keep the apostrophe of a possessive attached ("Japan's", "users'")
            if chunk[hi - 1] in "'’" and hi - 1 > lo and chunk[hi - 2] in "sS":
                break
            tail.append((chunk[hi - 1], base + hi - 1, base + hi))
            hi -= 1
        pieces = head
        if lo < hi:
            pieces.append((chunk[lo:hi], base + lo, base + hi))
        pieces.extend(reversed(tail))
        for text, start, end in pieces:
            tokens.append(SurfaceToken(len(tokens), text, is_word_text(text), start, end))
    return tokens


def split_clauses(sentence):
    """Token-index spans ``(start, end)`` between comma tokens.

    Spans without a word token (e.g. a dangling quote) are dropped.
    """
    tokens = sentence.tokens if isinstance(sentence, Sentence) else sentence
    spans = []
    start = 0
    for tok in list(tokens) + [None]:
        if tok is None or tok.text == ",":
            end = tok.position if tok is not None else len(tokens)
            if any(t.is_word for t in tokens[start:end]):
                spans.append((start, end))
            start = end + 1
    return spans


def _is_guarded(text, i):
    return 0 < i < len(text) - 1 and text[i - 1].isdigit() and text[i + 1].isdigit()


def _is_abbreviation(text, i, abbreviations):
    m = re.search(r"(\w+)$", text[:i])
    return bool(m) and m.group(1).lower() in abbreviations


def make_sentence(index, text):
    tokens = tuple(tokenize(text))
    sent = Sentence(index, text, tokens)
    return Sentence(index, text, tokens, tuple(split_clauses(sent)))


def split_sentences(text, abbreviations=None):
    """Split ``text`` into sentences on the delimiter set.

    ``abbreviations`` (off by default) is a set of lowercase words whose
    trailing period should not end a sentence.
    """
    text = unicodedata.normalize("NFC", text).replace("\r\n", "\n").replace("\r", "\n")
    segments = []
    start = 0
    for i, ch in enumerate(text):
        if ch not in SENTENCE_DELIMITERS:
            continue
        if ch in ".:" and _is_guarded(text, i):
            continue
        if ch == "." and abbreviations and _is_abbreviation(text, i, abbreviations):
            continue
        segments.append(text[start:i])
        start = i + 1
    segments.append(text[start:])

    sentences = []
    for seg in segments:
        seg = seg.strip()
        if not seg or not is_word_text(seg):
            continue
        sentences.append(make_sentence(len(sentences), seg))
    return sentences


def words_of(text):
    """Lowercased word tokens of a short string (titles, queries)."""
    return [t.text.lower() for t in tokenize(text) if t.is_word]
