"""End-to-end title generation for one document."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .corpus import TYPE2, Document, load_stopwords
from .deptree import ParserConfig, make_parser
from .dtcm import DELETION_RULES, compress, maybe_second_pass
from .errors import ConfigError, FixtureNotFoundError, InputError, RenderError
from .rake import extract_keywords
from .ranker import rank_sentence, rank_sentences, reduce_clauses, sentence_filters
from .segmenter import split_sentences
from .titletest import title_test

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    stopwords: Optional[str] = None
    keyword_metric: str = "ratio"
    keyword_top: Optional[int] = None
    central_k: int = 3
    max_sentence_words: int = 25
    second_pass_words: int = 10
    long_sentence_words: int = 20
    second_pass_trigger: str = "length"
    max_title_words: int = 15
    relevance_top_m: int = 5
    parser: str = "fixture:"
    parser_timeout: float = 30.0
    parser_pool: int = 1
    rules: tuple = DELETION_RULES
    tfidf_k: int = 6
    f1_mode: str = "multiset"
    f1_drop_stopwords: bool = False
    workers: int = 1

    def __post_init__(self):
        for name in ("central_k", "max_sentence_words", "second_pass_words",
                     "long_sentence_words", "max_title_words", "relevance_top_m", "tfidf_k"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.keyword_metric not in ("freq", "degree", "ratio"):
            raise ConfigError(f"unknown keyword metric {self.keyword_metric!r}")
        if self.second_pass_trigger not in ("length", "rate"):
            raise ConfigError("second_pass_trigger must be 'length' or 'rate'")
        if self.f1_mode not in ("multiset", "set"):
            raise ConfigError("f1_mode must be 'multiset' or 'set'")
        if isinstance(self.rules, str):
            self.rules = tuple(r for r in self.rules.replace(",", " ").split() if r)
        unknown = set(self.rules) - set(DELETION_RULES)
        if unknown:
            raise ConfigError(f"unknown deletion rules {sorted(unknown)}")
        self.parser_config()

    def parser_config(self):
        return ParserConfig.from_spec(self.parser, self.parser_timeout, self.parser_pool)

    @classmethod
    def from_mapping(cls, values):
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            key = key.strip().replace("-", "_")
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(known[key], raw)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path, overrides=None):
        """Flat ``key = value`` file; ``overrides`` win over file values."""
        values = read_config_file(path)
        values.update(overrides or {})
        return cls.from_mapping(values)


def read_config_file(path):
    values = {}
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} not found")
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _coerce(f, raw):
    if not isinstance(raw, str):
        return raw
    default = f.default
    if f.name in ("keyword_top", "stopwords"):
        if raw.lower() in ("", "none", "auto"):
            return None
        return int(raw) if f.name == "keyword_top" else raw
    try:
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {f.name}: {raw!r}") from None
    return raw


@dataclass
class Candidate:
    sentence_index: int
    sentence_text: str
    title: str
    verdict: object
    result: object
    rank2: float = 0.0
    fallback: bool = False


@dataclass
class TitleOutput:
    doc_id: str
    central_sentence: str
    title: str
    verdict: object
    rate: float
    passes: int
    fallback_used: bool
    keywords: list = field(default_factory=list)
    tried: int = 0

    def as_record(self):
        return {
            "id": self.doc_id,
            "central_sentence": self.central_sentence,
            "generated_title": self.title,
            "verdict": self.verdict.as_dict(),
            "compression_rate": self.rate,
            "passes": self.passes,
            "fallback_used": self.fallback_used,
        }


class TitleGenerator:
    def __init__(self, config=None, stopwords=None, parser=None):
        self.config = config or PipelineConfig()
        self.stopwords = stopwords if stopwords else load_stopwords(self.config.stopwords)
        self._parser = parser

    @property
    def parser(self):
        if self._parser is None:
            self._parser = make_parser(self.config.parser_config())
        return self._parser

    def keywords(self, sentences):
        return extract_keywords(sentences, self.stopwords, self.config.keyword_metric, self.config.keyword_top)

    def trim(self, sentence, keywords, tree=None):
        """Compress and title-test one sentence, parsing it unless ``tree`` is given."""
        cfg = self.config
        if tree is None:
            tree = self.parser.parse(sentence.text)
        result = compress(tree, keywords, cfg.rules)

        def reparse(text):
            return self.parser.parse(text)

        result = maybe_second_pass(
            result, keywords, cfg.second_pass_words, cfg.long_sentence_words,
            cfg.second_pass_trigger, cfg.rules, reparse=reparse,
        )
        try:
            title = result.title
        except RenderError:
            title = ""
        verdict = title_test(title, result, keywords, cfg.max_title_words, cfg.relevance_top_m)
        return Candidate(sentence.index, sentence.text, title, verdict, result)

    def run(self, doc) -> TitleOutput:
        if isinstance(doc, str):
            doc = Document("doc", doc)
        if not doc.body.strip():
            raise InputError(f"document {doc.id!r} is empty")
        cfg = self.config
        sentences = split_sentences(doc.body)
        if not sentences:
            raise InputError(f"document {doc.id!r} has no sentences")
        keywords = self.keywords(sentences)

        tried = []
        central = 0
        for ranked in rank_sentences(sentences, keywords, cfg.max_sentence_words):
            if central >= cfg.central_k:
                break
            sentence = reduce_clauses(ranked, keywords)
            tree = self.parser.parse(sentence.text)
            verdict = sentence_filters(tree)
            if not verdict:
                log.debug("sentence %d discarded: %s", sentence.index, verdict.reason)
                continue
            central += 1
            cand = self.trim(sentence, keywords, tree)
            cand.rank2 = ranked.rank2
            if cand.verdict.overall:
                return self._output(doc, cand, keywords, False, len(tried) + 1)
            tried.append(cand)

        # No candidate passed: the first sentence competes with the failed ones.
        first = sentences[0]
        pool = list(tried)
        if all(c.sentence_index != first.index for c in tried):
            try:
                first_cand = self.trim(reduce_clauses(first, keywords), keywords)
            except FixtureNotFoundError:
                if not tried:
                    raise
                log.info("no parse for the first sentence of %s", doc.id)
            else:
                first_cand.rank2 = rank_sentence(first, keywords).rank2
                first_cand.fallback = True
                pool.append(first_cand)
        prefer_first = doc.doc_type_hint == TYPE2

        def preference(c):
            tie = (c.fallback, c.rank2) if prefer_first else (c.rank2, c.fallback)
            return (c.verdict.n_passed, bool(c.title)) + tie

        best = max(pool, key=preference)
        return self._output(doc, best, keywords, True, len(tried))

    def _output(self, doc, cand, keywords, fallback, tried):
        return TitleOutput(
            doc_id=doc.id,
            central_sentence=cand.sentence_text,
            title=cand.title,
            verdict=cand.verdict,
            rate=cand.result.rate,
            passes=cand.result.passes,
            fallback_used=fallback,
            keywords=keywords,
            tried=tried,
        )


def run_pipeline(doc, config=None, stopwords=None, parser=None):
    return TitleGenerator(config, stopwords, parser).run(doc)
