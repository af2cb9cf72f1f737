"""Seeded synthetic corpora with planted topic structure.

Documents belong to topics; sessions and reference lists mostly draw from a
single topic, so the topic assignment is a known relevance oracle for
anything built from the generated logs.
"""

from __future__ import annotations

import os
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from ._dates import SECONDS_PER_DAY, add_months, date_to_epoch, epoch_to_date
from .logmodel import AccessEvent, CitationRecord, DocumentMeta, format_access_line, format_citation_line, format_metadata_line

ACCESS_FILE = "access.log"
META_FILE = "meta.tsv"
CITATION_FILE = "citations.tsv"
ORACLE_FILE = "oracle.tsv"

# seconds between consecutive downloads inside one generated session
_INTRA_SESSION_STEP = (1, 300)
# burst sessions co-access documents published within this many days of each other
_BURST_PUB_SPREAD_DAYS = 7


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n_topics: int = 20
    n_docs: int = 200
    n_users: int = 500
    n_sessions: int = 5000
    docs_per_session: int = 4
    p_intra_topic: float = 0.9
    citation_rate: float = 3.0
    announcement_burst: bool = False
    time_span_months: int = 48
    cutoff_month: int = 36
    start_date: date = date(2002, 1, 1)
    n_citing: int | None = None  # defaults to n_docs
    n_burst_sessions: int | None = None  # defaults to n_sessions // 10
    burst_window_days: int = 30
    n_crawlers: int = 0
    crawler_events: int = 600

    def validate(self) -> None:
        for name in ("n_topics", "n_docs", "n_users", "n_sessions", "docs_per_session", "time_span_months", "cutoff_month"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.n_topics > self.n_docs:
            raise ValueError(f"n_topics ({self.n_topics}) exceeds n_docs ({self.n_docs})")
        if self.docs_per_session > self.n_docs:
            raise ValueError(f"docs_per_session ({self.docs_per_session}) exceeds n_docs ({self.n_docs})")
        if not 0.0 <= self.p_intra_topic <= 1.0:
            raise ValueError(f"p_intra_topic must be in [0, 1], got {self.p_intra_topic}")
        if self.citation_rate < 0:
            raise ValueError(f"citation_rate must be >= 0, got {self.citation_rate}")
        if self.cutoff_month >= self.time_span_months:
            raise ValueError("cutoff_month must be smaller than time_span_months")
        if self.burst_window_days < 1:
            raise ValueError("burst_window_days must be >= 1")

    @property
    def end_date(self) -> date:
        return add_months(self.start_date, self.time_span_months)

    @property
    def cutoff_date(self) -> date:
        return add_months(self.start_date, self.cutoff_month)


@dataclass(frozen=True)
class TopicOracle:
    topic_of: dict[str, int]

    def relevant(self, doc: str) -> set[str]:
        return oracle_relevant(self, doc)


def oracle_relevant(oracle: TopicOracle, doc: str) -> set[str]:
    """Every other document sharing ``doc``'s topic."""
    if doc not in oracle.topic_of:
        raise KeyError(f"document {doc!r} not in oracle")
    t = oracle.topic_of[doc]
    return {d for d, td in oracle.topic_of.items() if td == t and d != doc}


@dataclass
class SyntheticCorpus:
    config: GenConfig
    meta: dict[str, DocumentMeta]
    events: list[AccessEvent]
    citations: list[CitationRecord]
    oracle: TopicOracle
    burst_clients: frozenset[str] = field(default_factory=frozenset)
    crawler_clients: frozenset[str] = field(default_factory=frozenset)

    def write(self, out_dir) -> dict[str, Path]:
        """Write the four corpus files into ``out_dir`` and return their paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "log": out / ACCESS_FILE,
            "meta": out / META_FILE,
            "cite": out / CITATION_FILE,
            "oracle": out / ORACLE_FILE,
        }
        _atomic_write(paths["log"], (format_access_line(e) for e in self.events))
        _atomic_write(paths["meta"], (format_metadata_line(self.meta[d]) for d in sorted(self.meta)))
        _atomic_write(paths["cite"], (format_citation_line(r) for r in self.citations))
        _atomic_write(
            paths["oracle"],
            (f"{d}\t{t}\n" for d, t in sorted(self.oracle.topic_of.items())),
        )
        return paths


def _atomic_write(path: Path, lines) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)
    os.replace(tmp, path)


def read_oracle(lines) -> TopicOracle:
    topic_of = {}
    for line in lines:
        doc, topic = line.rstrip("\n").split("\t")
        topic_of[doc] = int(topic)
    return TopicOracle(topic_of)


class _Catalogue:
    """Documents ordered by publication time, globally and per topic."""

    def __init__(self, doc_ids, pub_ts, topics, n_topics):
        order = sorted(range(len(doc_ids)), key=lambda i: (pub_ts[i], doc_ids[i]))
        self.ids = [doc_ids[i] for i in order]
        self.ts = [pub_ts[i] for i in order]
        self.by_topic = [[] for _ in range(n_topics)]
        self.topic_ts = [[] for _ in range(n_topics)]
        for i in order:
            self.by_topic[topics[i]].append(doc_ids[i])
            self.topic_ts[topics[i]].append(pub_ts[i])

    def available(self, t, strict=False):
        """Docs published at or before ``t`` (strictly before when ``strict``)."""
        cut = bisect_left if strict else bisect_right
        n = cut(self.ts, t)
        per_topic = [cut(ts, t) for ts in self.topic_ts]
        return n, per_topic

    def draw(self, rng, t, size, p_intra, strict=False):
        n, per_topic = self.available(t, strict)
        if n == 0 or size == 0:
            return []
        if rng.random() < p_intra:
            topics = [k for k, c in enumerate(per_topic) if c > 0]
            k = topics[rng.integers(len(topics))]
            pool = self.by_topic[k][: per_topic[k]]
        else:
            pool = self.ids[:n]
        take = min(size, len(pool))
        picks = rng.choice(len(pool), size=take, replace=False)
        return [pool[i] for i in sorted(picks)]


def generate(cfg: GenConfig) -> SyntheticCorpus:
    """Generate a corpus; identical config and seed give identical output."""
    cfg.validate()
    streams = np.random.SeedSequence(cfg.seed).spawn(5)
    rng_docs, rng_sessions, rng_bursts, rng_cite, rng_crawl = (np.random.default_rng(s) for s in streams)

    start, end = cfg.start_date, cfg.end_date
    start_ts, end_ts = date_to_epoch(start), date_to_epoch(end)
    span_days = (end - start).days

    width = max(4, len(str(cfg.n_docs - 1)))
    doc_ids = [f"doc{i:0{width}d}" for i in range(cfg.n_docs)]
    topics = rng_docs.permutation(np.arange(cfg.n_docs) % cfg.n_topics).tolist()
    offsets = rng_docs.integers(0, span_days, size=cfg.n_docs).tolist()
    pub_dates = [start + timedelta(days=o) for o in offsets]
    meta = {d: DocumentMeta(d, p) for d, p in zip(doc_ids, pub_dates)}
    pub_ts = [date_to_epoch(p) for p in pub_dates]
    oracle = TopicOracle(dict(zip(doc_ids, topics)))
    cat = _Catalogue(doc_ids, pub_ts, topics, cfg.n_topics)

    events: list[AccessEvent] = []
    earliest = cat.ts[0]

    def emit(rng, client, t0, docs):
        t = t0
        for i, doc in enumerate(docs):
            if i:
                t += int(rng.integers(*_INTRA_SESSION_STEP))
            events.append(AccessEvent(t, client, doc))

    uw = max(4, len(str(cfg.n_users - 1)))
    for _ in range(cfg.n_sessions):
        t = int(rng_sessions.integers(max(start_ts, earliest), end_ts))
        size = 1 + int(rng_sessions.poisson(cfg.docs_per_session - 1))
        docs = cat.draw(rng_sessions, t, min(size, cfg.n_docs), cfg.p_intra_topic)
        client = f"u{int(rng_sessions.integers(cfg.n_users)):0{uw}d}"
        # draw order within a session is random, access order follows it
        docs = [docs[i] for i in rng_sessions.permutation(len(docs))]
        emit(rng_sessions, client, t, docs)

    burst_clients = set()
    if cfg.announcement_burst:
        n_burst = cfg.n_burst_sessions if cfg.n_burst_sessions is not None else cfg.n_sessions // 10
        spread = _BURST_PUB_SPREAD_DAYS * SECONDS_PER_DAY
        window = cfg.burst_window_days * SECONDS_PER_DAY
        made = attempts = 0
        while made < n_burst and attempts < 50 * max(n_burst, 1):
            attempts += 1
            a = int(rng_bursts.integers(len(cat.ids)))
            hi = bisect_right(cat.ts, cat.ts[a] + spread)
            group = list(range(a, hi))
            if len(group) < 2:
                continue
            take = min(len(group), 2 + int(rng_bursts.integers(3)))
            picks = [group[i] for i in sorted(rng_bursts.choice(len(group), size=take, replace=False))]
            lo_t = cat.ts[picks[-1]]
            hi_t = min(cat.ts[picks[0]] + window - 3600, end_ts)
            if hi_t <= lo_t:
                continue
            t = int(rng_bursts.integers(lo_t, hi_t))
            client = f"b{made:06d}"
            burst_clients.add(client)
            emit(rng_bursts, client, t, [cat.ids[i] for i in picks])
            made += 1

    crawler_clients = set()
    for c in range(cfg.n_crawlers):
        client = f"crawler{c:03d}"
        crawler_clients.add(client)
        day = int(rng_crawl.integers(max(start_ts, earliest) // SECONDS_PER_DAY, end_ts // SECONDS_PER_DAY - 1))
        t0 = max(day * SECONDS_PER_DAY, earliest)
        n_avail, _ = cat.available(t0)
        ticks = np.sort(rng_crawl.integers(t0, (day + 1) * SECONDS_PER_DAY, size=cfg.crawler_events)).tolist()
        for t in ticks:
            events.append(AccessEvent(int(t), client, cat.ids[int(rng_crawl.integers(n_avail))]))

    events.sort()

    citations = []
    n_citing = cfg.n_citing if cfg.n_citing is not None else cfg.n_docs
    cw = max(5, len(str(n_citing - 1)))
    # citing dates start the day after the first publication
    first_day = min((epoch_to_date(earliest) - start).days + 1, span_days - 1)
    for i in range(n_citing):
        day = int(rng_cite.integers(first_day, span_days))
        cdate = start + timedelta(days=day)
        n_refs = int(rng_cite.poisson(cfg.citation_rate))
        refs = cat.draw(rng_cite, date_to_epoch(cdate), n_refs, cfg.p_intra_topic, strict=True)
        citations.append(CitationRecord(f"cit{i:0{cw}d}", cdate, tuple(refs)))
    citations.sort(key=lambda r: (r.citing_date, r.citing_doc))

    return SyntheticCorpus(
        cfg, meta, events, citations, oracle,
        frozenset(burst_clients), frozenset(crawler_clients),
    )
