"""Rapid Automatic Keyword Extraction over a single document.

Candidate phrases are maximal runs of non-stopword words inside a sentence;
punctuation and sentence boundaries also break a run. Each word gets a
frequency and a co-occurrence degree over all candidate instances, and a
phrase scores the sum of its word scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .segmenter import Sentence, split_sentences

METRICS = ("freq", "degree", "ratio")


@dataclass
class CandidatePhrase:
    words: tuple
    occurrences: int = 1
    first_position: int = 0

    @property
    def text(self):
        return " ".join(self.words)


@dataclass(frozen=True)
class Keyword:
    phrase: tuple
    score: float
    member_words: frozenset = field(default=frozenset())
    freq: int = 1

    @property
    def text(self):
        return " ".join(self.phrase)


@dataclass
class WordStats:
    freq: int = 0
    deg: int = 0
    score: float = 0.0


class WordScoreTable(dict):
    """Mapping word -> WordStats."""

    def score(self, word):
        return self[word].score


def extract_candidates(sentences: Iterable[Sentence], stopwords) -> list[CandidatePhrase]:
    by_words: dict[tuple, CandidatePhrase] = {}

    def flush(run):
        if not run:
            return
        key = tuple(run)
        if key in by_words:
            by_words[key].occurrences += 1
        else:
            by_words[key] = CandidatePhrase(key, 1, len(by_words))

    for sent in sentences:
        run = []
        for tok in sent.tokens:
            word = tok.text.lower()
            if not tok.is_word or word in stopwords:
                flush(run)
                run = []
            else:
                run.append(word)
        flush(run)
    return list(by_words.values())


def score_words(candidates: Sequence[CandidatePhrase], metric="ratio") -> WordScoreTable:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    table = WordScoreTable()
    for cand in candidates:
        size = len(cand.words)
        for word in cand.words:
            stats = table.setdefault(word, WordStats())
            stats.freq += cand.occurrences
            stats.deg += cand.occurrences * size
    for stats in table.values():
        if metric == "freq":
            stats.score = float(stats.freq)
        elif metric == "degree":
            stats.score = float(stats.deg)
        else:
            stats.score = stats.deg / stats.freq
    return table


def default_cut(candidates):
    distinct = {w for c in candidates for w in c.words}
    return math.ceil(len(distinct) / 3)


def rake(sentences, stopwords, metric="ratio", top=None) -> list[Keyword]:
    """Ranked keywords for already segmented sentences.

    ``top`` defaults to a third of the distinct candidate words, rounded up.
    """
    candidates = extract_candidates(sentences, stopwords)
    if not candidates:
        return []
    table = score_words(candidates, metric)
    scored = []
    for cand in candidates:
        score = math.fsum(table[w].score for w in cand.words)
        scored.append((cand, score))
    scored.sort(key=lambda cs: (-cs[1], cs[0].first_position))
    if top is None:
        top = default_cut(candidates)
    return [
        Keyword(cand.words, score, frozenset(cand.words), cand.occurrences)
        for cand, score in scored[:top]
    ]


def extract_keywords(doc, stopwords, metric="ratio", top=None) -> list[Keyword]:
    """Keywords of a Document, a raw string, or a list of Sentences."""
    if isinstance(doc, str):
        sentences = split_sentences(doc)
    elif hasattr(doc, "body"):
        sentences = split_sentences(doc.body)
    else:
        sentences = list(doc)
    return rake(sentences, stopwords, metric=metric, top=top)


def keyword_words(keywords):
    """Every member word of every keyword, with possessive variants."""
    words = set()
    for kw in keywords:
        for w in kw.member_words:
            words.add(w)
            stripped = strip_possessive(w)
            if stripped:
                words.add(stripped)
    return words


def strip_possessive(word):
    for suffix in ("'s", "’s", "'", "’"):
        if word.endswith(suffix) and len(word) > len(suffix):
            return word[: -len(suffix)]
    return word


def format_keywords_tsv(keywords):
    lines = ["phrase\tscore\tfreq"]
    for kw in keywords:
        lines.append(f"{kw.text}\t{kw.score:.6g}\t{kw.freq}")
    return "\n".join(lines) + "\n"
