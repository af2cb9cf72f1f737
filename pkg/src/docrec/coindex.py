"""Sparse symmetric pair counts for co-download and co-citation.

Pairs are stored with the lexicographically smaller id first, so symmetry
holds by construction and lookups normalise the key.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date
from itertools import combinations
from typing import IO, Iterable, Iterator, Mapping

from ._dates import SECONDS_PER_DAY, date_to_epoch
from .exceptions import FormatError, MissingMetadataError
from .logmodel import CitationRecord, DocumentMeta
from .sessionizer import Session

CODOWNLOAD = "codownload"
COCITATION = "cocitation"
KINDS = (CODOWNLOAD, COCITATION)

DEFAULT_DEBIAS_DAYS = 30
HEADER_TAG = "#coindex"


@dataclass(frozen=True)
class DebiasConfig:
    """Announcement-bias filter.

    A session's co-download of A and B is ignored when the session starts
    within ``window_days`` of the publication of both documents.
    """

    window_days: int = DEFAULT_DEBIAS_DAYS
    enabled: bool = True

    def __post_init__(self):
        if self.window_days < 0:
            raise ValueError(f"window_days must be >= 0, got {self.window_days}")


NO_DEBIAS = DebiasConfig(enabled=False)


class CoOccurrenceIndex:
    """Immutable map from unordered document pairs to positive counts."""

    __slots__ = ("kind", "_counts", "_adj")

    def __init__(self, kind: str, counts: Mapping[tuple[str, str], int] | None = None):
        if kind not in KINDS:
            raise ValueError(f"unknown index kind {kind!r}")
        self.kind = kind
        clean: dict[tuple[str, str], int] = {}
        for (a, b), c in (counts or {}).items():
            if a == b:
                raise ValueError(f"self-pair {a!r}")
            if c < 1:
                raise ValueError(f"non-positive count {c} for pair ({a!r}, {b!r})")
            key = (a, b) if a < b else (b, a)
            if key in clean:
                raise ValueError(f"pair {key} given twice")
            clean[key] = int(c)
        self._counts = clean
        self._adj = None

    @classmethod
    def _trusted(cls, kind, counts):
        obj = cls.__new__(cls)
        obj.kind = kind
        obj._counts = counts
        obj._adj = None
        return obj

    @property
    def counts(self) -> dict[tuple[str, str], int]:
        return dict(self._counts)

    def lookup(self, a: str, b: str) -> int:
        key = (a, b) if a < b else (b, a)
        return self._counts.get(key, 0)

    def partners(self, doc: str) -> dict[str, int]:
        """All documents with a nonzero count against ``doc``."""
        if self._adj is None:
            adj: dict[str, dict[str, int]] = defaultdict(dict)
            for (a, b), c in self._counts.items():
                adj[a][b] = c
                adj[b][a] = c
            self._adj = dict(adj)
        return self._adj.get(doc, {})

    def docs(self) -> set[str]:
        out = set()
        for a, b in self._counts:
            out.add(a)
            out.add(b)
        return out

    def grouped_items(self) -> Iterator[tuple[str, list[tuple[str, int]]]]:
        """``(doc_a, [(doc_b, count), ...])`` groups in sorted order."""
        # two-level sort: far cheaper than sorting millions of tuple keys at once
        by_first: dict[str, list[tuple[str, int]]] = defaultdict(list)
        for (a, b), c in self._counts.items():
            by_first[a].append((b, c))
        for a in sorted(by_first):
            rows = by_first.pop(a)
            rows.sort()
            yield a, rows

    def items(self) -> Iterator[tuple[tuple[str, str], int]]:
        """Entries sorted by ``(doc_a, doc_b)``."""
        for a, rows in self.grouped_items():
            for b, c in rows:
                yield (a, b), c

    def __len__(self):
        return len(self._counts)

    def __eq__(self, other):
        if not isinstance(other, CoOccurrenceIndex):
            return NotImplemented
        return self.kind == other.kind and self._counts == other._counts

    def __repr__(self):
        return f"CoOccurrenceIndex(kind={self.kind!r}, pairs={len(self._counts)})"


def freshness_deadlines(meta: Mapping[str, DocumentMeta], window_days: int) -> dict[str, int]:
    window = window_days * SECONDS_PER_DAY
    return {doc: date_to_epoch(m.pub_date) + window for doc, m in meta.items()}


def count_codownloads(
    sessions: Iterable[Session],
    meta: Mapping[str, DocumentMeta] | None = None,
    debias: DebiasConfig = DebiasConfig(),
) -> CoOccurrenceIndex:
    """Count sessions in which each pair of distinct documents was co-downloaded.

    With debiasing enabled, a pair is skipped for a session that starts
    before both documents leave their post-publication window.
    """
    counts: Counter = Counter()
    if not debias.enabled:
        for s in sessions:
            if len(s.docs) > 1:
                counts.update(combinations(sorted(s.docs), 2))
        return CoOccurrenceIndex._trusted(CODOWNLOAD, dict(counts))

    if meta is None:
        raise ValueError("document metadata is required when debiasing is enabled")
    fresh_until = freshness_deadlines(meta, debias.window_days)
    for s in sessions:
        docs = sorted(s.docs)
        try:
            fresh = [s.start_ts < fresh_until[d] for d in docs]
        except KeyError as exc:
            raise MissingMetadataError(exc.args[0]) from None
        if len(docs) < 2:
            continue
        if not any(fresh):
            counts.update(combinations(docs, 2))
            continue
        for i in range(len(docs) - 1):
            fi = fresh[i]
            a = docs[i]
            for j in range(i + 1, len(docs)):
                if fi and fresh[j]:
                    continue
                counts[(a, docs[j])] += 1
    return CoOccurrenceIndex._trusted(CODOWNLOAD, dict(counts))


def count_cocitations(citations: Iterable[CitationRecord], cutoff: date | None = None) -> CoOccurrenceIndex:
    """Count citing records in which each pair of references appears together.

    When ``cutoff`` is given only records dated strictly before it contribute.
    """
    counts: Counter = Counter()
    for rec in citations:
        if cutoff is not None and rec.citing_date >= cutoff:
            continue
        if len(rec.refs) > 1:
            counts.update(combinations(sorted(rec.refs), 2))
    return CoOccurrenceIndex._trusted(COCITATION, dict(counts))


def merge(a: CoOccurrenceIndex, b: CoOccurrenceIndex) -> CoOccurrenceIndex:
    """Pointwise sum of two indices of the same kind."""
    if a.kind != b.kind:
        raise ValueError(f"cannot merge {a.kind} index with {b.kind} index")
    out = dict(a._counts)
    for key, c in b._counts.items():
        out[key] = out.get(key, 0) + c
    return CoOccurrenceIndex._trusted(a.kind, out)


def write_index(index: CoOccurrenceIndex, sink: IO[str]) -> None:
    sink.write(f"{HEADER_TAG}\tkind={index.kind}\n")
    for a, rows in index.grouped_items():
        sink.write("".join([f"{a}\t{b}\t{c}\n" for b, c in rows]))


def read_index(source: Iterable[str]) -> CoOccurrenceIndex:
    it = iter(source)
    header = next(it, None)
    if header is None:
        raise FormatError("empty index file (missing header)")
    parts = header.rstrip("\n").split("\t")
    if len(parts) != 2 or parts[0] != HEADER_TAG or not parts[1].startswith("kind="):
        raise FormatError(f"bad index header {header.rstrip()!r}")
    kind = parts[1][len("kind="):]
    if kind not in KINDS:
        raise FormatError(f"unknown index kind {kind!r}")
    counts: dict[tuple[str, str], int] = {}
    prev = None
    for line_no, line in enumerate(it, 2):
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 3:
            raise FormatError(f"line {line_no}: expected 3 fields, got {len(fields)}")
        a, b, c = fields
        if not a or not b:
            raise FormatError(f"line {line_no}: empty document id")
        if not (a < b):
            raise FormatError(f"line {line_no}: pair ({a!r}, {b!r}) not in ascending order")
        if not c.isascii() or not c.isdigit() or int(c) < 1:
            raise FormatError(f"line {line_no}: count must be a positive integer, got {c!r}")
        key = (a, b)
        if prev is not None and key <= prev:
            raise FormatError(f"line {line_no}: rows not strictly sorted")
        counts[key] = int(c)
        prev = key
    return CoOccurrenceIndex._trusted(kind, counts)
