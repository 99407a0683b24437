"""F1 comparison of generated titles against reference titles.

The TF-IDF baseline takes the ``k`` highest tf*idf words of a document
(``idf = ln(N / df)``) and prints them in document order.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from statistics import fmean
from typing import NamedTuple

from .errors import ConfigError, ParserError, ScoreError, TitlegenError
from .segmenter import split_sentences

log = logging.getLogger(__name__)


class EvalResult(NamedTuple):
    precision: float
    recall: float
    f1: float


def f1_tokens(text):
    """Lowercased words with edge punctuation stripped."""
    out = []
    for tok in text.lower().split():
        tok = tok.strip("""!"#$%&()*+,./:;<=>?@[\\]^_`{|}~'‘’“”-–—""")
        if tok:
            out.append(tok)
    return out


def f1_score(generated, reference, mode="multiset", stopwords=None):
    """Word-overlap precision, recall and F1; ``stopwords`` are dropped if given."""
    gen = f1_tokens(generated) if isinstance(generated, str) else list(generated)
    ref = f1_tokens(reference) if isinstance(reference, str) else list(reference)
    if stopwords:
        gen = [w for w in gen if w not in stopwords]
        ref = [w for w in ref if w not in stopwords]
    if not gen or not ref:
        raise ScoreError("cannot score an empty title")
    if mode == "set":
        overlap = len(set(gen) & set(ref))
        gen_n, ref_n = len(set(gen)), len(set(ref))
    else:
        overlap = sum((Counter(gen) & Counter(ref)).values())
        gen_n, ref_n = len(gen), len(ref)
    p = overlap / gen_n
    r = overlap / ref_n
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return EvalResult(p, r, f1)


def document_words(text, stopwords):
    words = []
    for sent in split_sentences(text):
        for tok in sent.tokens:
            w = tok.text.lower()
            if tok.is_word and w not in stopwords:
                words.append(w)
    return words


class TfidfModel:
    """Document frequencies over a corpus, for baseline titles."""

    def __init__(self, documents, stopwords):
        self.stopwords = frozenset(stopwords)
        self.n_docs = len(documents)
        if self.n_docs < 2:
            raise ConfigError("the TF-IDF baseline needs a corpus of at least 2 documents for idf")
        self.df = Counter()
        for doc in documents:
            self.df.update(set(document_words(doc.body, self.stopwords)))

    def idf(self, word):
        df = self.df.get(word, 0)
        if df == 0:
            # word unseen in the corpus (document scored from outside it)
            return math.log(self.n_docs)
        return math.log(self.n_docs / df)

    def weights(self, doc):
        words = document_words(doc.body if hasattr(doc, "body") else doc, self.stopwords)
        tf = Counter(words)
        first = {}
        for i, w in enumerate(words):
            first.setdefault(w, i)
        return {w: tf[w] * self.idf(w) for w in tf}, first

    def title(self, doc, k=6):
        weights, first = self.weights(doc)
        best = sorted(weights, key=lambda w: (-weights[w], first[w]))[:k]
        return " ".join(sorted(best, key=first.get))


def tfidf_title(doc, corpus, k=6, stopwords=None):
    stopwords = corpus.stopwords if stopwords is None else stopwords
    return TfidfModel(list(corpus), stopwords).title(doc, k)


# -- corpus evaluation --------------------------------------------------------

@dataclass
class Report:
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def category_means(self):
        groups = defaultdict(list)
        for row in self.rows:
            groups[row["category"]].append(row)
        out = []
        for cat in sorted(groups):
            rows = groups[cat]
            out.append({
                "category": cat,
                "n": len(rows),
                "mean_f1_dtatg": fmean(r["f1"] for r in rows),
                "mean_f1_tfidf": fmean(r["f1_tfidf"] for r in rows),
            })
        return out

    def overall_means(self):
        if not self.rows:
            return None, None
        return fmean(r["f1"] for r in self.rows), fmean(r["f1_tfidf"] for r in self.rows)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["category", "n", "mean_f1_dtatg", "mean_f1_tfidf"])
        for m in self.category_means():
            writer.writerow([m["category"], m["n"], f"{m['mean_f1_dtatg']:.6f}", f"{m['mean_f1_tfidf']:.6f}"])
        return buf.getvalue()


def sample_documents(corpus, sample=None, seed=0):
    docs = [d for d in corpus if d.reference_title]
    if sample is None or sample >= len(docs):
        return docs
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(docs)), sample))
    return [docs[i] for i in picked]


def evaluate_corpus(corpus, config=None, sample=None, seed=0, tfidf_k=6, f1_mode="multiset",
                    workers=1, parser=None, f1_drop_stopwords=False):
    """Run the title pipeline and the TF-IDF baseline on sampled documents."""
    from concurrent.futures import ThreadPoolExecutor

    from .pipeline import PipelineConfig, TitleGenerator

    config = config or PipelineConfig()
    generator = TitleGenerator(config, stopwords=corpus.stopwords or None, parser=parser)
    report = Report()
    docs = sample_documents(corpus, sample, seed)
    if not docs:
        return report
    model = TfidfModel(list(corpus), generator.stopwords)
    f1_stop = generator.stopwords if f1_drop_stopwords else None

    def run(doc):
        try:
            out = generator.run(doc)
        except (ParserError, TitlegenError) as exc:
            return doc, None, str(exc)
        return doc, out, None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, docs))
    else:
        results = [run(doc) for doc in docs]

    for doc, out, error in results:
        if out is None:
            log.warning("document %s skipped: %s", doc.id, error)
            report.skipped.append({"id": doc.id, "category": doc.category, "reason": error})
            continue
        baseline = model.title(doc, tfidf_k)
        try:
            generated = f1_score(out.title, doc.reference_title, f1_mode, f1_stop)
            base = f1_score(baseline, doc.reference_title, f1_mode, f1_stop) if baseline else EvalResult(0.0, 0.0, 0.0)
        except ScoreError as exc:
            log.warning("document %s skipped: %s", doc.id, exc)
            report.skipped.append({"id": doc.id, "category": doc.category, "reason": str(exc)})
            continue
        row = out.as_record()
        row.update({
            "category": doc.category,
            "reference_title": doc.reference_title,
            "tfidf_title": baseline,
            "precision": generated.precision,
            "recall": generated.recall,
            "f1": generated.f1,
            "f1_tfidf": base.f1,
        })
        report.rows.append(row)
    return report
