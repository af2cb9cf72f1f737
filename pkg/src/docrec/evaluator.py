"""Offline evaluation: coverage, recommendation counts over age, and MAP over age."""

from __future__ import annotations

import logging
import math
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from itertools import combinations
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from ._dates import add_months, date_to_epoch, epoch_to_date, whole_months_between
from .coindex import CODOWNLOAD, COCITATION, CoOccurrenceIndex, DebiasConfig, freshness_deadlines
from .exceptions import MissingMetadataError
from .logmodel import CitationRecord, DocumentMeta
from .recommender import DEFAULT_CAP, max_strength, recommend
from .sessionizer import Session

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalQuery:
    query_doc: str
    relevant: frozenset[str]
    age_months: int

    def __post_init__(self):
        if not self.relevant:
            raise ValueError(f"query {self.query_doc!r} has no relevant documents")
        if self.query_doc in self.relevant:
            raise ValueError(f"query {self.query_doc!r} lists itself as relevant")
        if self.age_months < 0:
            raise ValueError(f"negative age for query {self.query_doc!r}")


@dataclass(frozen=True)
class CurvePoint:
    x: int
    y: float
    n: int


def average_precision(ranked: Sequence[str], relevant) -> float:
    """Uninterpolated average precision of ``ranked`` against ``relevant``.

    Relevant documents missing from ``ranked`` contribute zero precision.
    """
    relevant = set(relevant)
    if not relevant:
        raise ValueError("average precision is undefined for an empty relevant set")
    hits = 0
    total = 0.0
    for k, doc in enumerate(ranked, 1):
        if doc in relevant:
            hits += 1
            total += hits / k
    return total / len(relevant)


def build_eval_queries(
    citations: Iterable[CitationRecord],
    meta: Mapping[str, DocumentMeta],
    cutoff: date,
    corpus=None,
) -> list[EvalQuery]:
    """Leave-one-out queries from reference lists dated on or after ``cutoff``.

    Every in-corpus reference D of such a list becomes a query whose relevant
    set is the other in-corpus references; its age is the whole months from
    D's publication to the citing date. ``corpus`` defaults to the metadata
    keys.
    """
    corpus = set(meta) if corpus is None else set(corpus)
    queries = []
    for rec in citations:
        if rec.citing_date < cutoff:
            continue
        refs = [r for r in rec.refs if r in corpus]
        if len(refs) < 2:
            continue
        for d in refs:
            m = meta.get(d)
            if m is None:
                logger.warning("skipping query %r: no publication date", d)
                continue
            age = whole_months_between(m.pub_date, rec.citing_date)
            if age < 0:
                continue
            queries.append(EvalQuery(d, frozenset(r for r in refs if r != d), age))
    return queries


def subsample_queries(queries: Sequence[EvalQuery], size: int | None, seed: int = 0) -> list[EvalQuery]:
    """Seeded sample without replacement, preserving input order."""
    if size is None or size >= len(queries):
        return list(queries)
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(len(queries), size=size, replace=False))
    return [queries[i] for i in keep]


def query_aps(index: CoOccurrenceIndex, queries: Iterable[EvalQuery], cap: int = DEFAULT_CAP) -> list[float]:
    return [average_precision(recommend(index, q.query_doc, cap).docs, q.relevant) for q in queries]


def map_over_age(index: CoOccurrenceIndex, queries: Sequence[EvalQuery], cap: int = DEFAULT_CAP) -> list[CurvePoint]:
    """Mean AP per age bin, bins ascending, empty bins omitted."""
    by_bin: dict[int, list[float]] = defaultdict(list)
    for q, ap in zip(queries, query_aps(index, queries, cap)):
        by_bin[q.age_months].append(ap)
    return [CurvePoint(b, math.fsum(v) / len(v), len(v)) for b, v in sorted(by_bin.items())]


def mean_average_precision(index: CoOccurrenceIndex, queries: Sequence[EvalQuery], cap: int = DEFAULT_CAP) -> float:
    aps = query_aps(index, queries, cap)
    if not aps:
        raise ValueError("no queries")
    return math.fsum(aps) / len(aps)


def coverage_distribution(index: CoOccurrenceIndex, corpus) -> list[int]:
    """Per-document maximum pair count, sorted descending."""
    return sorted((max_strength(index, d) for d in corpus), reverse=True)


def coverage_fraction(index: CoOccurrenceIndex, corpus) -> float:
    dist = coverage_distribution(index, corpus)
    if not dist:
        return 0.0
    return sum(1 for v in dist if v >= 1) / len(dist)


def _timed_pairs(mode, sessions, citations, meta, debias):
    """Yield ``(timestamp, a, b)`` for every counted co-occurrence, time-ordered."""
    if mode == CODOWNLOAD:
        if sessions is None:
            raise ValueError("co-download growth needs sessions")
        fresh_until = freshness_deadlines(meta, debias.window_days) if debias.enabled else None
        for s in sorted(sessions, key=lambda s: s.start_ts):
            docs = sorted(s.docs)
            if fresh_until is not None:
                missing = [d for d in docs if d not in fresh_until]
                if missing:
                    raise MissingMetadataError(missing[0])
            for a, b in combinations(docs, 2):
                if fresh_until is not None and s.start_ts < fresh_until[a] and s.start_ts < fresh_until[b]:
                    continue
                yield s.start_ts, a, b
    elif mode == COCITATION:
        if citations is None:
            raise ValueError("co-citation growth needs citation records")
        for rec in sorted(citations, key=lambda r: r.citing_date):
            t = date_to_epoch(rec.citing_date)
            for a, b in combinations(sorted(rec.refs), 2):
                yield t, a, b
    else:
        raise ValueError(f"unknown mode {mode!r}")


def first_partner_times(mode, meta, sessions=None, citations=None, debias=DebiasConfig()) -> dict[str, list[int]]:
    """For each document, the sorted times at which each distinct partner first appeared."""
    first: dict[str, dict[str, int]] = defaultdict(dict)
    for t, a, b in _timed_pairs(mode, sessions, citations, meta, debias):
        fa = first[a]
        if b not in fa:
            fa[b] = t
            first[b][a] = t
    return {doc: sorted(seen.values()) for doc, seen in first.items()}


def default_n_bins(meta, times: Mapping[str, list[int]], bin_months: int) -> int:
    """Enough bins to reach the last observed data point from the earliest publication."""
    last = max((ts[-1] for ts in times.values() if ts), default=None)
    if last is None or not meta:
        return 1
    earliest = min(m.pub_date for m in meta.values())
    months = max(whole_months_between(earliest, epoch_to_date(last)), 0) + 1
    return max(1, math.ceil(months / bin_months))


def partner_growth(
    meta: Mapping[str, DocumentMeta],
    mode: str,
    *,
    sessions: Iterable[Session] | None = None,
    citations: Iterable[CitationRecord] | None = None,
    cap: int = DEFAULT_CAP,
    bin_months: int = 1,
    n_bins: int | None = None,
    debias: DebiasConfig = DebiasConfig(),
) -> tuple[list[int], dict[str, list[int]]]:
    """Per-document partner counts at each age bin boundary.

    Bin ``k`` (``x = k * bin_months``, ``k = 1..n_bins``) counts distinct
    partners from data strictly before ``pub_date + x`` months, capped at
    ``cap``. Returns the bin x-values and a series per metadata document.
    """
    if bin_months < 1:
        raise ValueError(f"bin_months must be >= 1, got {bin_months}")
    times = first_partner_times(mode, meta, sessions, citations, debias)
    if n_bins is None:
        n_bins = default_n_bins(meta, times, bin_months)
    xs = [k * bin_months for k in range(1, n_bins + 1)]
    series = {}
    for doc in sorted(meta):
        ts = times.get(doc, [])
        pub = meta[doc].pub_date
        row = []
        for x in xs:
            boundary = date_to_epoch(add_months(pub, x))
            row.append(min(bisect_left(ts, boundary), cap))
        series[doc] = row
    return xs, series


def recs_over_age(
    meta: Mapping[str, DocumentMeta],
    mode: str,
    *,
    sessions: Iterable[Session] | None = None,
    citations: Iterable[CitationRecord] | None = None,
    cap: int = DEFAULT_CAP,
    bin_months: int = 1,
    n_bins: int | None = None,
    debias: DebiasConfig = DebiasConfig(),
) -> list[CurvePoint]:
    """Mean number of (capped) recommendations per document as a function of age."""
    xs, series = partner_growth(
        meta, mode, sessions=sessions, citations=citations, cap=cap,
        bin_months=bin_months, n_bins=n_bins, debias=debias,
    )
    if not series:
        return []
    n = len(series)
    return [CurvePoint(x, sum(row[i] for row in series.values()) / n, n) for i, x in enumerate(xs)]


def write_curve(points: Iterable[CurvePoint], sink: IO[str]) -> None:
    sink.write("bin,value,n\n")
    for p in points:
        sink.write(f"{p.x},{p.y!r},{p.n}\n")


def write_coverage(dist: Iterable[int], sink: IO[str]) -> None:
    sink.write("rank,max_count\n")
    for rank, v in enumerate(dist, 1):
        sink.write(f"{rank},{v}\n")
