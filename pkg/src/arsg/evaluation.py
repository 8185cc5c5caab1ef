"""Scoring: constituent-based tree comparison and ROUGE-2 / ROUGE-S4.

All scores are exact rationals.  Tree constituents are internal nodes keyed
by their leaf EDU spans; ROUGE drops punctuation and stop-set tokens before
pairing.
"""

import string
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyReference, LeafMismatch

LEVELS = ("structure", "nuclearity", "rre", "dre")


@dataclass(frozen=True)
class Prf:
    precision: Fraction
    recall: Fraction

    @property
    def f_score(self):
        p, r = self.precision, self.recall
        if p + r == 0:
            return Fraction(0)
        return 2 * p * r / (p + r)


@dataclass(frozen=True)
class TreeScore:
    levels: tuple  # of (level name, Prf)

    def level(self, name):
        return dict(self.levels)[name]


@dataclass(frozen=True)
class RougeScore:
    precision: Fraction
    recall: Fraction

    @property
    def f_score(self):
        p, r = self.precision, self.recall
        if p + r == 0:
            return Fraction(0)
        return 2 * p * r / (p + r)


def _role_pattern(node):
    return tuple(child.attributes.get("role") for child in node.children)


def constituents(root, boundaries=None):
    """Internal nodes as (span, role pattern, rre label, dre symbol) records,
    keyed by the frozenset of leaf EDU ids.  ``boundaries`` optionally
    restricts constituents to spans lying within one (start, end) range."""
    records = {}

    def walk(node):
        if node.is_leaf:
            return frozenset([node.leaf_edu])
        span = frozenset()
        for child in node.children:
            span |= walk(child)
        if boundaries is None or any(
            all(start <= edu <= end for edu in span) for start, end in boundaries
        ):
            records[span] = (
                _role_pattern(node),
                node.attributes.get("rre"),
                node.dre,
            )
        return span

    walk(getattr(root, "root", root))
    return records


def count_hits(pred_records, gold_records):
    hits = {level: 0 for level in LEVELS}
    for span, (roles, rre, dre) in pred_records.items():
        gold = gold_records.get(span)
        if gold is None:
            continue
        hits["structure"] += 1
        gold_roles, gold_rre, gold_dre = gold
        if roles == gold_roles:
            hits["nuclearity"] += 1
        if rre == gold_rre:
            hits["rre"] += 1
        if dre == gold_dre:
            hits["dre"] += 1
    return hits


def tree_scores(pred, gold, boundaries=None):
    """Micro P/R/F per level for one tree pair."""
    return corpus_tree_scores([(pred, gold)], boundaries=boundaries)


def corpus_tree_scores(pairs, boundaries=None):
    """Micro-averaged P/R/F per level over (pred, gold) tree pairs."""
    total_hits = {level: 0 for level in LEVELS}
    total_pred = 0
    total_gold = 0
    for pred, gold in pairs:
        pred_root = getattr(pred, "root", pred)
        gold_root = getattr(gold, "root", gold)
        pred_leaf_ids = sorted(n.leaf_edu for n in pred_root.leaves())
        gold_leaf_ids = sorted(n.leaf_edu for n in gold_root.leaves())
        if pred_leaf_ids != gold_leaf_ids:
            raise LeafMismatch("prediction and gold cover different EDU sets")
        pred_records = constituents(pred_root, boundaries)
        gold_records = constituents(gold_root, boundaries)
        hits = count_hits(pred_records, gold_records)
        for level in LEVELS:
            total_hits[level] += hits[level]
        total_pred += len(pred_records)
        total_gold += len(gold_records)
    levels = []
    for level in LEVELS:
        precision = (
            Fraction(total_hits[level], total_pred) if total_pred else Fraction(0)
        )
        recall = (
            Fraction(total_hits[level], total_gold) if total_gold else Fraction(0)
        )
        levels.append((level, Prf(precision, recall)))
    return TreeScore(levels=tuple(levels))


# ---------------------------------------------------------------------------
# ROUGE

_PUNCT = set(string.punctuation)


def _clean(tokens, stop_set):
    stop = {s.lower() for s in stop_set}
    return [
        t.lower()
        for t in tokens
        if t.lower() not in stop and not all(ch in _PUNCT for ch in t)
    ]


def _bigrams(tokens):
    return Counter(zip(tokens, tokens[1:]))


def _skip_bigrams(tokens, max_gap):
    pairs = Counter()
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + max_gap, len(tokens) - 1) + 1):
            pairs[(tokens[i], tokens[j])] += 1
    return pairs


def _prf_from_counts(cand_counts, ref_counts):
    overlap = sum((cand_counts & ref_counts).values())
    cand_total = sum(cand_counts.values())
    ref_total = sum(ref_counts.values())
    precision = Fraction(overlap, cand_total) if cand_total else Fraction(0)
    recall = Fraction(overlap, ref_total) if ref_total else Fraction(0)
    return RougeScore(precision=precision, recall=recall)


def rouge2(candidate, reference, stop_set=frozenset()):
    """Clipped bigram overlap P/R/F."""
    ref = _clean(reference, stop_set)
    if not ref:
        raise EmptyReference("reference empty after filtering")
    cand = _clean(candidate, stop_set)
    return _prf_from_counts(_bigrams(cand), _bigrams(ref))


def rouge_s(candidate, reference, stop_set=frozenset(), max_gap=4):
    """Skip-bigram P/R/F: ordered token pairs at distance <= max_gap
    (contiguous pairs included)."""
    ref = _clean(reference, stop_set)
    if not ref:
        raise EmptyReference("reference empty after filtering")
    cand = _clean(candidate, stop_set)
    return _prf_from_counts(
        _skip_bigrams(cand, max_gap), _skip_bigrams(ref, max_gap)
    )


def rouge_s4(candidate, reference, stop_set=frozenset()):
    return rouge_s(candidate, reference, stop_set, max_gap=4)
