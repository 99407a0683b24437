"""Conciseness, fluency and topic-relevance checks for a trimmed sentence.

Fluency is judged structurally: the kept words must still form one
connected subtree, so no modifier or preposition is left without its
governor. It does not catch errors a grammar checker would.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .dtcm import SUBJECT_RELS, VERBAL_TAGS, CompressionResult
from .rake import strip_possessive
from .segmenter import words_of

MAX_TITLE_WORDS = 15
CLAUSE_RELS = frozenset({"ccomp", "advcl", "acl", "acl:relcl", "csubj", "csubjpass"})
NOMINAL_SUBJECT_TAGS = frozenset({"NOUN", "PROPN"})


class Check(NamedTuple):
    passed: bool
    reason: str

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class TitleVerdict:
    concise: Check
    fluent: Check
    relevant: Check

    @property
    def overall(self):
        return bool(self.concise and self.fluent and self.relevant)

    @property
    def n_passed(self):
        return sum(bool(c) for c in (self.concise, self.fluent, self.relevant))

    def as_dict(self):
        return {
            "overall": self.overall,
            "concise": {"pass": self.concise.passed, "reason": self.concise.reason},
            "fluent": {"pass": self.fluent.passed, "reason": self.fluent.reason},
            "relevant": {"pass": self.relevant.passed, "reason": self.relevant.reason},
        }


def _title_words(title):
    if isinstance(title, str):
        return title.split()
    return list(title)


def _kept_parent(tree, kept, nid):
    head = tree.node(nid).head
    return head if head in kept else None


def _root_is_verbal(tree, kept, root_id):
    root = tree.node(root_id)
    if root.upos in VERBAL_TAGS:
        return True
    return any(tree.node(c).deprel == "cop" and c in kept for c in tree.children[root_id])


def conciseness_test(title_words, result: CompressionResult, max_words=MAX_TITLE_WORDS):
    words = _title_words(title_words)
    if len(words) > max_words:
        return Check(False, f"length: {len(words)} words > {max_words}")
    tree, kept, root_id = result.tree, result.kept, result.root_id
    if root_id not in kept:
        return Check(False, "root removed")
    for nid in sorted(kept):
        if nid == root_id:
            continue
        node = tree.node(nid)
        if _kept_parent(tree, kept, nid) is None:
            continue
        if node.deprel in CLAUSE_RELS:
            return Check(False, f"clause: kept {node.deprel} edge to {node.form!r}")
        if node.deprel == "conj" and node.upos in VERBAL_TAGS and tree.node(node.head).upos in VERBAL_TAGS:
            return Check(False, f"clause: verbs {tree.node(node.head).form!r} and {node.form!r} coordinated")
    subjects = [tree.node(i) for i in sorted(kept)
                if tree.node(i).deprel in SUBJECT_RELS and _kept_parent(tree, kept, i) is not None]
    for subj in subjects:
        if subj.upos == "PRON":
            return Check(False, f"subject form: pronoun subject {subj.form!r}")
    if _root_is_verbal(tree, kept, root_id):
        if not any(s.upos in NOMINAL_SUBJECT_TAGS and s.head == root_id for s in subjects):
            return Check(False, "structure: verb without a noun subject")
        return Check(True, "subject + verb")
    return Check(True, "nominal title")


def fluency_test(result: CompressionResult):
    """Connectivity proxy for grammaticality."""
    tree, kept, root_id = result.tree, result.kept, result.root_id
    if root_id not in kept:
        return Check(False, "root removed")
    for nid in sorted(kept):
        node = tree.node(nid)
        if nid == root_id or node.is_punct:
            continue
        if _kept_parent(tree, kept, nid) is None:
            if node.deprel == "case":
                return Check(False, f"dangling case: {node.form!r} lost its governor")
            return Check(False, f"disconnected: {node.form!r} lost its governor")
    if _root_is_verbal(tree, kept, root_id):
        has_subject = any(
            c in kept and tree.node(c).deprel in SUBJECT_RELS | {"csubj", "csubjpass"}
            for c in tree.children[root_id]
        )
        if not has_subject:
            return Check(False, "verb root without a subject")
    return Check(True, "connected (structural check only)")


def _match_forms(word):
    w = word.lower().strip(".,;:!?\"'()[]")
    return {w, strip_possessive(w)} - {""}


def top_keywords(keywords, m=5):
    """Best ``m`` keywords, ordered independently of the input order."""
    return sorted(keywords, key=lambda kw: (-kw.score, tuple(kw.phrase)))[:m]


def topic_relevance_test(title_words, keywords, m=5):
    if isinstance(title_words, str):
        title_words = words_of(title_words)
    title_forms = set()
    for w in title_words:
        title_forms |= _match_forms(w)
    for kw in top_keywords(keywords, m):
        members = set()
        for w in kw.member_words:
            members |= _match_forms(w)
        shared = members & title_forms
        if shared:
            return Check(True, f"shares {sorted(shared)[0]!r} with keyword {' '.join(kw.phrase)!r}")
    return Check(False, f"no word shared with the top {m} keywords")


def title_test(title, result, keywords, max_words=MAX_TITLE_WORDS, m=5):
    return TitleVerdict(
        concise=conciseness_test(title, result, max_words),
        fluent=fluency_test(result),
        relevant=topic_relevance_test(title, keywords, m),
    )
