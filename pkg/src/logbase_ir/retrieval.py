"""Cosine-similarity ranking of documents against a weighted query.

Scoring is deterministic: query terms are visited in sorted order, postings
in doc_id order, and ties in the final ordering break toward the smaller
doc_id. Repeated runs produce bit-identical rankings.
"""

import math
from dataclasses import dataclass, field
from typing import Mapping

from .collection_io import RawQuery
from .index import InvertedIndex
from .textpipe import pipeline
from .weighting import WeightScheme, idf, weigh_query


@dataclass(frozen=True)
class RankedList:
    query_id: int
    entries: tuple[tuple[int, float], ...] = field(default_factory=tuple)


def cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Cosine of two sparse weight vectors; 0.0 when either norm is zero."""
    dot = 0.0
    for term in sorted(a):
        if term in b:
            dot += a[term] * b[term]
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


class Ranker:
    """Scores queries against one index under one weighting scheme.

    Per-term IDF and per-document norms depend only on (index, base), so they
    are computed once here and shared across queries; a parameter sweep builds
    one Ranker per base.
    """

    def __init__(self, index: InvertedIndex, scheme: WeightScheme):
        self.index = index
        self.scheme = scheme
        self._idf: dict[str, float] = {
            term: idf(index, term, scheme) for term in index.dictionary
        }
        norms: dict[int, float] = {}
        for doc_id, pairs in index.doc_terms.items():
            acc = 0.0
            for term, tf in pairs:
                w = tf * self._idf[term]
                acc += w * w
            norms[doc_id] = math.sqrt(acc)
        self._doc_norm = norms

    def rank_tokens(self, query_id: int, tokens: list[str]) -> RankedList:
        """Rank all documents sharing at least one term with the query."""
        query_weights = weigh_query(self.index, tokens, self.scheme)
        if not query_weights:
            return RankedList(query_id)
        query_norm = math.sqrt(sum(tw.weight * tw.weight for tw in query_weights))
        dot: dict[int, float] = {}
        for tw in query_weights:
            term_idf = self._idf[tw.term]
            for p in self.index.dictionary[tw.term].postings:
                dot[p.doc_id] = dot.get(p.doc_id, 0.0) + tw.weight * (p.tf * term_idf)
        entries = []
        for doc_id in sorted(dot):
            denom = query_norm * self._doc_norm[doc_id]
            score = dot[doc_id] / denom if denom != 0.0 else 0.0
            entries.append((doc_id, score))
        entries.sort(key=lambda e: (-e[1], e[0]))
        return RankedList(query_id, tuple(entries))


def rank(
    index: InvertedIndex,
    query: RawQuery,
    scheme: WeightScheme,
    stoplist: frozenset[str] | None = None,
) -> RankedList:
    """Tokenize, stem and score one query against the whole collection."""
    tokens = pipeline(query.text, stoplist)
    return Ranker(index, scheme).rank_tokens(query.query_id, tokens)


def format_run(ranked_lists: list[RankedList]) -> str:
    """Run-file form: one ``query_id doc_id rank score`` TSV line per entry."""
    lines = []
    for rl in ranked_lists:
        for position, (doc_id, score) in enumerate(rl.entries, start=1):
            lines.append(f"{rl.query_id}\t{doc_id}\t{position}\t{score!r}\n")
    return "".join(lines)
