"""Sentence ranking by contained keywords and central-sentence selection.

``rank1`` sums keyword scores; ``rank2`` sums ``2 ** score`` so a few
high-scoring keywords outweigh many low-scoring ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .segmenter import Sentence, make_sentence, split_sentences

MAX_CANDIDATE_WORDS = 25
BE_PREDICATES = frozenset({"am", "is", "are"})
PRONOUN_TAGS = frozenset({"PRON"})


def round_sig(x, digits=12):
    """Round to ``digits`` significant digits; used for all rank comparisons."""
    return float(f"{x:.{digits}g}")


def rank1(matches):
    return math.fsum(score for _, score in _pairs(matches))


def rank2(matches):
    return math.fsum(2.0 ** score for _, score in _pairs(matches))


def _pairs(matches):
    # accept bare scores as well as (keyword, score) pairs
    for m in matches:
        if isinstance(m, tuple):
            yield m
        else:
            yield None, m


@dataclass(frozen=True)
class RankedSentence:
    sentence: Sentence
    matched_keywords: tuple
    rank1: float
    rank2: float

    @property
    def word_count(self):
        return self.sentence.word_count

    def rank(self, measure="rank2"):
        return self.rank2 if measure == "rank2" else self.rank1


def _word_slots(tokens):
    """Lowercased words with ``None`` in place of punctuation."""
    return [t.text.lower() if t.is_word else None for t in tokens]


def _contains(slots, phrase):
    n = len(phrase)
    if n == 0:
        return False
    first = phrase[0]
    for i in range(len(slots) - n + 1):
        if slots[i] == first and tuple(slots[i:i + n]) == phrase:
            return True
    return False


def match_keywords(sentence, keywords, tokens=None):
    """Keywords whose full phrase occurs contiguously; each counted once."""
    slots = _word_slots(sentence.tokens if tokens is None else tokens)
    return [(kw, kw.score) for kw in keywords if _contains(slots, tuple(kw.phrase))]


def rank_sentence(sentence, keywords):
    matches = tuple(match_keywords(sentence, keywords))
    return RankedSentence(sentence, matches, rank1(matches), rank2(matches))


def rank_sentences(sentences, keywords, max_words=MAX_CANDIDATE_WORDS, measure="rank2"):
    """Every sentence of at most ``max_words`` words, best first.

    Order: rank descending, then fewer words, then document position.
    """
    ranked = [rank_sentence(s, keywords) for s in sentences if s.word_count <= max_words]
    ranked.sort(key=lambda r: (-round_sig(r.rank(measure)), r.word_count, r.sentence.index))
    return ranked


def select_central_sentences(doc, keywords, k=3, max_words=MAX_CANDIDATE_WORDS, measure="rank2"):
    if isinstance(doc, str):
        sentences = split_sentences(doc)
    elif hasattr(doc, "body"):
        sentences = split_sentences(doc.body)
    else:
        sentences = list(doc)
    return rank_sentences(sentences, keywords, max_words, measure)[:k]


def reduce_clauses(ranked, keywords):
    """Keep at most the two best clauses (by rank2), joined without commas."""
    sentence = ranked.sentence if isinstance(ranked, RankedSentence) else ranked
    spans = list(sentence.clauses)
    if len(spans) <= 1:
        return sentence
    if len(spans) > 2:
        scored = []
        for order, (start, end) in enumerate(spans):
            matches = match_keywords(sentence, keywords, tokens=sentence.tokens[start:end])
            scored.append((round_sig(rank2(matches)), order))
        best = sorted(scored, key=lambda so: (-so[0], so[1]))[:2]
        spans = [spans[order] for order in sorted(o for _, o in best)]
    text = " ".join(sentence.span_text(span) for span in spans)
    return make_sentence(sentence.index, text)


class FilterResult(NamedTuple):
    passed: bool
    reason: str = ""

    def __bool__(self):
        return self.passed


def sentence_filters(tree):
    """Reject pronoun subjects and am/is/are predicates."""
    for node in tree.nodes:
        if node.deprel in ("nsubj", "nsubjpass") and node.upos in PRONOUN_TAGS:
            return FilterResult(False, f"pronoun subject {node.form!r}")
    root = tree.node(tree.root_id)
    if root.form.lower() in BE_PREDICATES:
        return FilterResult(False, f"be-verb predicate {root.form!r}")
    for cid in tree.children[root.id]:
        child = tree.node(cid)
        if child.deprel == "cop" and child.form.lower() in BE_PREDICATES:
            return FilterResult(False, f"be-verb predicate {child.form!r}")
    return FilterResult(True, "ok")
