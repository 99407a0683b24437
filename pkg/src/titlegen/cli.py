"""Command line interface.

Subcommands::

    titlegen title --in article.txt --parser fixture:tests/fixtures/parses
    titlegen keywords --in article.txt
    titlegen tree --in article.txt --parser fixture:DIR
    titlegen eval --corpus bbc/ --sample 100 --seed 7 --parser fixture:DIR
    titlegen parse-cache --corpus bbc/ --parser command:my-ud-parser --out DIR

Exit status: 0 on success, 1 for bad input or usage, 2 for configuration
or parser errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .corpus import document_from_text, load_corpus, load_stopwords, write_jsonl
from .deptree import make_parser, normalize_key_text, write_fixture
from .dtcm import compress, format_diff_tsv, maybe_second_pass
from .errors import ConfigError, InputError, ParserError, TitlegenError
from .evaluator import evaluate_corpus
from .pipeline import PipelineConfig, TitleGenerator
from .rake import format_keywords_tsv
from .ranker import rank_sentences, reduce_clauses
from .segmenter import split_sentences

log = logging.getLogger("titlegen")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="titlegen", description="Dependency-tree title generator")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, parse=True):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--stopwords", help="stopword file (default: bundled list)")
        p.add_argument("--metric", dest="keyword_metric", choices=("freq", "degree", "ratio"))
        p.add_argument("--top", dest="keyword_top", type=int, help="number of keywords kept")
        if parse:
            p.add_argument("--parser", help="fixture:<dir> or command:<argv>")
            p.add_argument("--k", dest="central_k", type=int, help="central sentences tried")
            p.add_argument("--rules", help="comma-separated deletion rules to enable")
            p.add_argument("--second-pass-trigger", dest="second_pass_trigger", choices=("length", "rate"))

    p = sub.add_parser("title", help="generate titles")
    common(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--in", dest="infile", help="article file (default: stdin)")
    src.add_argument("--corpus", help="corpus root, one title per document")
    p.add_argument("--layout", default="bbc_dirs", choices=("bbc_dirs", "flat"))
    p.add_argument("--no-title-line", action="store_true",
                   help="treat the whole input file as body (no reference title line)")
    p.add_argument("--jsonl", help="write per-document records here")

    p = sub.add_parser("keywords", help="dump RAKE keywords as TSV")
    common(p, parse=False)
    p.add_argument("--in", dest="infile")
    p.add_argument("--no-title-line", action="store_true")

    p = sub.add_parser("tree", help="show ranked sentences and the pruning diff")
    common(p)
    p.add_argument("--in", dest="infile")
    p.add_argument("--no-title-line", action="store_true")
    p.add_argument("--sentence", help="parse and prune this sentence instead of the top-ranked one")

    p = sub.add_parser("eval", help="F1 report against reference titles")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--layout", default="bbc_dirs", choices=("bbc_dirs", "flat"))
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--csv", help="write the category report here (default: stdout)")
    p.add_argument("--jsonl", help="write per-document rows here")

    p = sub.add_parser("parse-cache", help="cache parses of candidate sentences as fixtures")
    common(p)
    p.add_argument("--corpus")
    p.add_argument("--in", dest="infile")
    p.add_argument("--layout", default="bbc_dirs", choices=("bbc_dirs", "flat"))
    p.add_argument("--no-title-line", action="store_true")
    p.add_argument("--out", required=True, help="fixture directory to write")
    return parser


_CONFIG_KEYS = ("stopwords", "keyword_metric", "keyword_top", "parser", "central_k", "rules",
                "second_pass_trigger", "workers")


def make_config(args):
    overrides = {k: getattr(args, k) for k in _CONFIG_KEYS if getattr(args, k, None) is not None}
    if getattr(args, "config", None):
        return PipelineConfig.from_file(args.config, overrides)
    return PipelineConfig.from_mapping(overrides)


def _read_document(args):
    if args.infile:
        path = Path(args.infile)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        doc_id = path.stem
    else:
        text = sys.stdin.read()
        doc_id = "stdin"
    if not text.strip():
        raise InputError("empty input")
    return document_from_text(doc_id, text, with_title=not args.no_title_line)


def cmd_title(args, out):
    config = make_config(args)
    generator = TitleGenerator(config)
    if args.corpus:
        docs = list(load_corpus(args.corpus, args.layout, generator.stopwords))
    else:
        docs = [_read_document(args)]
    records = []
    for doc in docs:
        result = generator.run(doc)
        out.write(result.title + "\n")
        rec = result.as_record()
        rec.update({"category": doc.category, "reference_title": doc.reference_title})
        records.append(rec)
    if args.jsonl:
        write_jsonl(records, args.jsonl)
    return 0


def cmd_keywords(args, out):
    config = make_config(args)
    stopwords = load_stopwords(config.stopwords)
    doc = _read_document(args)
    generator = TitleGenerator(config, stopwords)
    out.write(format_keywords_tsv(generator.keywords(split_sentences(doc.body))))
    return 0


def cmd_tree(args, out):
    config = make_config(args)
    generator = TitleGenerator(config)
    if args.sentence:
        keywords = []
        if args.infile:
            keywords = generator.keywords(split_sentences(_read_document(args).body))
        text = args.sentence
    else:
        doc = _read_document(args)
        sentences = split_sentences(doc.body)
        keywords = generator.keywords(sentences)
        ranked = rank_sentences(sentences, keywords, config.max_sentence_words)
        out.write("index\trank1\trank2\twords\ttext\n")
        for r in ranked:
            out.write(f"{r.sentence.index}\t{r.rank1:.6g}\t{r.rank2:.6g}\t{r.word_count}\t{r.sentence.text}\n")
        if not ranked:
            return 0
        text = reduce_clauses(ranked[0], keywords).text
        out.write("\n")
    tree = generator.parser.parse(text)
    first = compress(tree, keywords, config.rules)
    result = maybe_second_pass(first, keywords, config.second_pass_words, config.long_sentence_words,
                               config.second_pass_trigger, config.rules)
    out.write(format_diff_tsv(first))
    out.write(f"\n# title\t{result.title}\n# rate\t{result.rate:.4f}\n# passes\t{result.passes}\n")
    return 0


def cmd_eval(args, out):
    config = make_config(args)
    stopwords = load_stopwords(config.stopwords)
    corpus = load_corpus(args.corpus, args.layout, stopwords)
    report = evaluate_corpus(corpus, config, sample=args.sample, seed=args.seed,
                             tfidf_k=config.tfidf_k, f1_mode=config.f1_mode,
                             workers=config.workers, f1_drop_stopwords=config.f1_drop_stopwords)
    csv_text = report.to_csv()
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
    else:
        out.write(csv_text)
    if args.jsonl:
        write_jsonl(report.rows + [dict(r, skipped=True) for r in report.skipped], args.jsonl)
    if report.skipped:
        log.warning("%d documents skipped", len(report.skipped))
    return 0


def cmd_parse_cache(args, out):
    config = make_config(args)
    if config.parser_config().mode != "command":
        raise ConfigError("parse-cache needs --parser command:<argv>")
    generator = TitleGenerator(config)
    parser = make_parser(config.parser_config())
    if args.corpus:
        docs = list(load_corpus(args.corpus, args.layout, generator.stopwords))
    else:
        docs = [_read_document(args)]
    written = 0
    for doc in docs:
        sentences = split_sentences(doc.body)
        keywords = generator.keywords(sentences)
        wanted = [reduce_clauses(r, keywords) for r in rank_sentences(sentences, keywords, config.max_sentence_words)]
        wanted.append(reduce_clauses(sentences[0], keywords))
        seen = set()
        for sent in wanted:
            key = normalize_key_text(sent.text)
            if key in seen:
                continue
            seen.add(key)
            try:
                tree = parser.parse(sent.text)
            except ParserError as exc:
                log.warning("%s: %s", doc.id, exc)
                continue
            write_fixture(tree, args.out, sent.text)
            written += 1
    out.write(f"{written} parses written to {args.out}\n")
    return 0


COMMANDS = {
    "title": cmd_title,
    "keywords": cmd_keywords,
    "tree": cmd_tree,
    "eval": cmd_eval,
    "parse-cache": cmd_parse_cache,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"titlegen: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (ConfigError, ParserError) as exc:
        sys.stderr.write(f"titlegen: {exc}\n")
        return 2
    except (InputError, TitlegenError, OSError) as exc:
        sys.stderr.write(f"titlegen: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
