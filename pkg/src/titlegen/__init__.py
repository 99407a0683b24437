"""Automatic title generation by keyword-ranked central sentences and
dependency-tree pruning."""

from .corpus import Corpus, Document, load_corpus, load_stopwords
from .deptree import DependencyTree, DepNode, ParserConfig, parse_conllu, serialize_conllu
from .dtcm import CompressionResult, apply_deletion_rules, prune, render_title
from .evaluator import f1_score, tfidf_title
from .pipeline import PipelineConfig, TitleGenerator, run_pipeline
from .rake import Keyword, extract_keywords

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Document", "load_corpus", "load_stopwords",
    "DependencyTree", "DepNode", "ParserConfig", "parse_conllu", "serialize_conllu",
    "CompressionResult", "apply_deletion_rules", "prune", "render_title",
    "f1_score", "tfidf_title",
    "PipelineConfig", "TitleGenerator", "run_pipeline",
    "Keyword", "extract_keywords",
]
