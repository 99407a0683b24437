"""Dependency tree compression.

``prune`` repeatedly removes unprotected leaves until nothing changes. A node
is protected when it is (part of) a keyword, the root, either end of an
nsubj/nsubjpass/dobj/iobj/compound/nummod edge, an nmod dependent, or the
case marker of an nmod dependent. Protection depends only on the original
tree, so the surviving set is every protected node plus its ancestors, no
matter which order leaves are removed in.

``apply_deletion_rules`` then removes larger patterns (edge adverbials,
"X said", a trailing "and" clause, the part before a "that" clause, runs of
sibling nmods), and ``maybe_second_pass`` compresses long results again.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .deptree import DependencyTree, detokenize, preorder
from .errors import RenderError
from .rake import keyword_words

log = logging.getLogger(__name__)

BOTH_ENDS_KEPT = frozenset({"nsubj", "nsubjpass", "dobj", "iobj", "compound", "nummod"})
VERBAL_TAGS = frozenset({"VERB", "AUX"})
SUBJECT_RELS = frozenset({"nsubj", "nsubjpass"})

DELETION_RULES = ("edge_adverbials", "say_clause", "and_clause", "that_clause", "nmod_run")


@dataclass(frozen=True)
class CompressionResult:
    tree: DependencyTree
    kept: frozenset
    root_id: int
    n_words: int
    passes: int = 1
    applied_rules: tuple = ()

    @property
    def kept_word_ids(self):
        return [i for i in self.tree.word_ids if i in self.kept]

    @property
    def kept_words(self):
        return len(self.kept_word_ids)

    @property
    def mask(self):
        """One boolean per word token of ``tree``: True if kept."""
        return tuple(i in self.kept for i in self.tree.word_ids)

    @property
    def rate(self):
        return self.kept_words / self.n_words if self.n_words else 0.0

    @property
    def title(self):
        return render_title(self.tree, self.kept)


def _keyword_set(keywords):
    if keywords is None:
        return set()
    if isinstance(keywords, (set, frozenset)):
        return keywords
    return keyword_words(keywords)


def protected_ids(tree: DependencyTree, keywords=None):
    words = _keyword_set(keywords)
    protected = {tree.root_id}
    for node in tree.nodes:
        if node.is_punct:
            continue
        if node.lower_forms & words:
            protected.add(node.id)
        if node.deprel in BOTH_ENDS_KEPT:
            protected.add(node.id)
            if node.head:
                protected.add(node.head)
        elif node.deprel == "nmod":
            protected.add(node.id)
            for cid in tree.children[node.id]:
                if tree.node(cid).deprel == "case":
                    protected.add(cid)
    # a governor reached through an edge may itself be punctuation in odd parses
    return {i for i in protected if i == tree.root_id or not tree.node(i).is_punct}


def is_protected(node_id, tree, keywords=None):
    if not 1 <= node_id <= len(tree):
        raise KeyError(f"node {node_id} not in tree")
    return node_id in protected_ids(tree, keywords)


def prune(tree: DependencyTree, keywords=None) -> CompressionResult:
    """Remove unprotected leaves in preorder sweeps until a fixpoint."""
    protected = protected_ids(tree, keywords)
    alive = set(n.id for n in tree.nodes)
    live_children = {nid: set(kids) for nid, kids in tree.children.items()}
    order = preorder(tree)
    changed = True
    while changed:
        changed = False
        for nid in order:
            if nid in alive and not live_children[nid] and nid not in protected:
                alive.discard(nid)
                live_children[tree.node(nid).head].discard(nid)
                changed = True
    return CompressionResult(tree, frozenset(alive), tree.root_id, tree.word_count)


# -- deletion rules -----------------------------------------------------------

def _is_verbal(tree, nid):
    node = tree.node(nid)
    if node.upos in VERBAL_TAGS:
        return True
    return any(tree.node(c).deprel == "cop" for c in tree.children[nid])


def _has_subject(tree, nid):
    return any(tree.node(c).deprel in SUBJECT_RELS for c in tree.children[nid])


def _rule_edge_adverbials(tree, kept, root_id):
    words = tree.word_ids
    if not words:
        return kept, root_id
    first, last = words[0], words[-1]
    remove = set()
    for edge_word, pick in ((first, min), (last, max)):
        best = None
        for node in tree.nodes:
            if node.deprel not in ("advmod", "advcl") or node.id not in kept or node.id == root_id:
                continue
            span = [i for i in tree.subtree(node.id) if tree.node(i).is_word]
            if span and pick(span) == edge_word:
                sub = tree.subtree(node.id)
                if root_id in sub:
                    continue
                if best is None or len(sub) > len(best):
                    best = sub
        if best:
            remove |= best
    return kept - remove, root_id


def _is_say(node):
    return node.lemma.lower() == "say" or node.form.lower() in ("say", "says", "said", "saying")


def _rule_say_clause(tree, kept, root_id):
    root = tree.node(root_id)
    if _is_say(root):
        kids = [tree.node(c) for c in tree.children[root_id]]
        subj = [k for k in kids if k.deprel in SUBJECT_RELS and k.upos in ("NOUN", "PROPN", "PRON")]
        comp = [k for k in kids if k.deprel == "ccomp"]
        if subj and comp:
            promoted = comp[0].id
            return kept & tree.subtree(promoted), promoted
    # "..., analysts said": the say-verb hangs off the main clause as parataxis
    for node in tree.nodes:
        if node.id in kept and node.deprel == "parataxis" and _is_say(node) and _has_subject(tree, node.id):
            return kept - tree.subtree(node.id), root_id
    return kept, root_id


def _rule_and_clause(tree, kept, root_id):
    for head in preorder(tree):
        if head not in kept or not (_is_verbal(tree, head) and _has_subject(tree, head)):
            continue
        for cid in tree.children[head]:
            conj = tree.node(cid)
            if conj.deprel != "conj" or cid not in kept:
                continue
            ands = [c for c in tree.children[cid]
                    if tree.node(c).deprel == "cc" and tree.node(c).form.lower() == "and"]
            # older schemes attach cc to the first conjunct, before the second
            ands += [c for c in tree.children[head]
                     if tree.node(c).deprel == "cc" and tree.node(c).form.lower() == "and" and c < cid]
            if ands:
                return kept - tree.subtree(cid) - set(ands), root_id
    return kept, root_id


def _rule_that_clause(tree, kept, root_id):
    for node in tree.nodes:
        if node.deprel != "mark" or node.form.lower() != "that":
            continue
        verb = node.head
        if verb and _is_verbal(tree, verb) and _has_subject(tree, verb):
            new_kept = frozenset(i for i in kept if i > node.id)
            new_root = root_id if root_id in new_kept else verb
            return new_kept, new_root
    return kept, root_id


def _kept_word_span(tree, nid, kept):
    ids = [i for i in tree.subtree(nid) if i in kept and tree.node(i).is_word]
    return (min(ids), max(ids)) if ids else None


def _rule_nmod_run(tree, kept, root_id):
    kept_words = [i for i in tree.word_ids if i in kept]
    rank = {wid: r for r, wid in enumerate(kept_words)}
    remove = set()
    for gov in sorted(kept):
        nmods = []
        for cid in tree.children[gov]:
            if cid in kept and tree.node(cid).deprel == "nmod":
                span = _kept_word_span(tree, cid, kept)
                if span:
                    nmods.append((span, cid))
        nmods.sort()
        run = nmods[:1]
        for item in nmods[1:]:
            if rank[item[0][0]] == rank[run[-1][0][1]] + 1:
                run.append(item)
                continue
            if len(run) > 1:
                for _, cid in run[:-1]:
                    remove |= tree.subtree(cid)
            run = [item]
        if len(run) > 1:
            for _, cid in run[:-1]:
                remove |= tree.subtree(cid)
    return kept - remove, root_id


_RULES = {
    "edge_adverbials": _rule_edge_adverbials,
    "say_clause": _rule_say_clause,
    "and_clause": _rule_and_clause,
    "that_clause": _rule_that_clause,
    "nmod_run": _rule_nmod_run,
}


def apply_deletion_rules(result: CompressionResult, rules=DELETION_RULES) -> CompressionResult:
    """Apply each enabled deletion rule once, in the canonical order."""
    kept, root_id = frozenset(result.kept), result.root_id
    applied = list(result.applied_rules)
    for name in DELETION_RULES:
        if name not in rules:
            continue
        new_kept, new_root = _RULES[name](result.tree, kept, root_id)
        new_kept = frozenset(new_kept)
        if new_kept == kept and new_root == root_id:
            continue
        if not any(result.tree.node(i).is_word for i in new_kept):
            log.warning("deletion rule %s would remove every word; skipped", name)
            continue
        kept, root_id = new_kept, new_root
        applied.append(name)
    return replace(result, kept=kept, root_id=root_id, applied_rules=tuple(applied))


def compress(tree, keywords=None, rules=DELETION_RULES):
    return apply_deletion_rules(prune(tree, keywords), rules)


# -- second pass ----------------------------------------------------------------

def induced_tree(result: CompressionResult) -> DependencyTree:
    """The kept nodes as a tree of their own, rooted at the effective root.

    Each kept node hangs off its nearest kept ancestor; nodes cut off from the
    root by a deletion rule are attached to the root directly.
    """
    tree = result.tree
    kept_ids = sorted(result.kept)
    new_id = {old: i for i, old in enumerate(kept_ids, start=1)}
    nodes = []
    for old in kept_ids:
        node = tree.node(old)
        if old == result.root_id:
            head, rel = 0, "root"
        else:
            parent = node.head
            while parent and parent not in result.kept:
                parent = tree.node(parent).head
            if not parent or parent not in new_id:
                parent = result.root_id
            head, rel = new_id[parent], node.deprel
        nodes.append(replace(node, id=new_id[old], head=head, deprel=rel,
                             raw_deprel=rel if old == result.root_id else node.raw_deprel))
    text = detokenize(n.form for n in nodes)
    return DependencyTree(tuple(nodes), text=text)


def needs_second_pass(result, max_title_words=10, long_sentence_words=20, trigger="length"):
    if result.passes >= 2 or result.n_words <= long_sentence_words:
        return False
    if trigger == "rate":
        return result.rate < 0.5
    return result.kept_words > max_title_words


def maybe_second_pass(result, keywords=None, max_title_words=10, long_sentence_words=20,
                      trigger="length", rules=DELETION_RULES,
                      reparse: Optional[Callable[[str], DependencyTree]] = None):
    """Compress a long result once more, treating its kept words as the sentence.

    ``reparse`` (text -> tree) re-parses the trimmed text; without it, or if
    it fails, the kept part of the original tree is used.
    """
    if not needs_second_pass(result, max_title_words, long_sentence_words, trigger):
        return result
    tree = None
    if reparse is not None:
        try:
            tree = reparse(result.title)
        except Exception as exc:  # any parser failure falls back to the induced tree
            log.info("second pass re-parse failed (%s); using the induced tree", exc)
    if tree is None:
        tree = induced_tree(result)
    second = compress(tree, keywords, rules)
    return replace(second, n_words=result.n_words, passes=result.passes + 1,
                   applied_rules=result.applied_rules + second.applied_rules)


# -- rendering --------------------------------------------------------------------

def render_title(tree: DependencyTree, kept) -> str:
    forms = [tree.node(i).form for i in sorted(kept) if not tree.node(i).is_punct]
    if not forms:
        raise RenderError("nothing left to render")
    title = detokenize(forms)
    title = title.rstrip(".,;:!?")
    return title[:1].upper() + title[1:]


def diff_rows(result: CompressionResult):
    """(id, form, deprel, kept) rows for the tree-debug output."""
    return [(n.id, n.form, n.deprel, n.id in result.kept) for n in result.tree.nodes]


def format_diff_tsv(result):
    lines = ["id\tform\tdeprel\tkept"]
    for nid, form, rel, kept in diff_rows(result):
        lines.append(f"{nid}\t{form}\t{rel}\t{'1' if kept else '0'}")
    return "\n".join(lines) + "\n"
