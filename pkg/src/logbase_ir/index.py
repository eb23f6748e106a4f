"""Inverted index: term dictionary with document frequencies and postings.

The index is an immutable snapshot built once per collection. Terms and
postings are kept in sorted order so every downstream traversal (weighting,
scoring, serialization) is reproducible run to run.
"""

import json
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class Posting:
    doc_id: int
    tf: int


@dataclass(frozen=True)
class TermInfo:
    doc_freq: int
    postings: tuple[Posting, ...]


class InvertedIndex:
    """Term dictionary plus per-document term lists.

    Attributes:
        n_docs: total number of documents, including ones that produced no
            tokens.
        dictionary: term -> TermInfo, keys in sorted term order.
        doc_lengths: doc_id -> number of distinct terms (0 for empty docs).
    """

    FORMAT_VERSION = 1

    def __init__(
        self,
        n_docs: int,
        dictionary: dict[str, TermInfo],
        doc_lengths: dict[int, int],
    ):
        self.n_docs = n_docs
        self.dictionary = dictionary
        self.doc_lengths = doc_lengths
        # doc_id -> ((term, tf), ...) in sorted term order; derived, used for
        # per-document weight vectors and norms
        doc_terms: dict[int, list[tuple[str, int]]] = {d: [] for d in doc_lengths}
        for term, info in dictionary.items():
            for p in info.postings:
                doc_terms[p.doc_id].append((term, p.tf))
        self.doc_terms: dict[int, tuple[tuple[str, int], ...]] = {
            d: tuple(pairs) for d, pairs in doc_terms.items()
        }

    def doc_freq(self, term: str) -> int:
        info = self.dictionary.get(term)
        return info.doc_freq if info else 0

    def term_freq(self, term: str, doc_id: int) -> int:
        info = self.dictionary.get(term)
        if not info:
            return 0
        ids = [p.doc_id for p in info.postings]
        i = bisect_left(ids, doc_id)
        if i < len(ids) and ids[i] == doc_id:
            return info.postings[i].tf
        return 0

    def __contains__(self, term: str) -> bool:
        return term in self.dictionary

    def to_dict(self) -> dict:
        return {
            "format_version": self.FORMAT_VERSION,
            "n_docs": self.n_docs,
            "dictionary": {
                term: [info.doc_freq, [[p.doc_id, p.tf] for p in info.postings]]
                for term, info in self.dictionary.items()
            },
            "doc_lengths": {str(d): n for d, n in self.doc_lengths.items()},
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "InvertedIndex":
        version = data.get("format_version")
        if version != cls.FORMAT_VERSION:
            raise ValueError(f"unsupported index format version {version!r}")
        dictionary = {
            term: TermInfo(df, tuple(Posting(d, tf) for d, tf in postings))
            for term, (df, postings) in sorted(data["dictionary"].items())
        }
        doc_lengths = {int(d): n for d, n in data["doc_lengths"].items()}
        return cls(data["n_docs"], dictionary, doc_lengths)

    @classmethod
    def load(cls, path: str) -> "InvertedIndex":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def build_index(docs: list[tuple[int, list[str]]]) -> InvertedIndex:
    """Build an index from (doc_id, tokens) pairs.

    Documents with no tokens still count toward n_docs. Raises ValueError on
    an empty document list or duplicate doc_ids.
    """
    if not docs:
        raise ValueError("empty collection: no documents to index")
    doc_lengths: dict[int, int] = {}
    term_docs: dict[str, dict[int, int]] = {}
    for doc_id, tokens in docs:
        if doc_id in doc_lengths:
            raise ValueError(f"duplicate doc_id {doc_id}")
        counts = Counter(tokens)
        doc_lengths[doc_id] = len(counts)
        for term, tf in counts.items():
            term_docs.setdefault(term, {})[doc_id] = tf
    dictionary = {
        term: TermInfo(
            len(by_doc),
            tuple(Posting(d, by_doc[d]) for d in sorted(by_doc)),
        )
        for term, by_doc in sorted(term_docs.items())
    }
    return InvertedIndex(len(docs), dictionary, doc_lengths)
