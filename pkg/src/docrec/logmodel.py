"""On-disk data contracts and their parsers.

Three tab-separated text formats feed the pipeline:

* access log: ``epoch_seconds<TAB>client_id<TAB>doc_id``
* document metadata: ``doc_id<TAB>YYYY-MM-DD``
* citations: ``citing_doc<TAB>YYYY-MM-DD<TAB>ref1,ref2,...``
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Iterator, NamedTuple

from ._dates import SECONDS_PER_DAY, parse_date
from .exceptions import ContractError, ParseError

logger = logging.getLogger(__name__)

DEFAULT_MAX_EVENTS_PER_DAY = 500


class AccessEvent(NamedTuple):
    """One download of ``doc_id`` by ``client_id`` at ``timestamp`` (UTC epoch seconds)."""

    timestamp: int
    client_id: str
    doc_id: str


@dataclass(frozen=True, slots=True)
class DocumentMeta:
    doc_id: str
    pub_date: date


@dataclass(frozen=True, slots=True)
class CitationRecord:
    citing_doc: str
    citing_date: date
    refs: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.refs)) != len(self.refs):
            raise ValueError(f"duplicate refs in citation record {self.citing_doc!r}")
        if self.citing_doc in self.refs:
            raise ValueError(f"citation record {self.citing_doc!r} cites itself")


@dataclass(frozen=True)
class FilterConfig:
    """Rule-based crawler/proxy filter.

    A client listed in ``blocked_clients``, or one that issues more than
    ``max_events_per_client_per_day`` requests on any single UTC day, is
    dropped entirely.
    """

    blocked_clients: frozenset[str] = field(default_factory=frozenset)
    max_events_per_client_per_day: int = DEFAULT_MAX_EVENTS_PER_DAY

    def __post_init__(self):
        object.__setattr__(self, "blocked_clients", frozenset(self.blocked_clients))
        cap = self.max_events_per_client_per_day
        if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
            raise ValueError(f"max_events_per_client_per_day must be a positive integer, got {cap!r}")


def _check_token(value, what, line_no):
    if not value:
        raise ParseError(f"empty {what}", line_no)
    if "\n" in value or "\r" in value:
        raise ParseError(f"newline in {what}", line_no)


def parse_access_line(line: str, line_no: int | None = None) -> AccessEvent:
    """Parse one ``timestamp<TAB>client_id<TAB>doc_id`` record."""
    text = line.rstrip("\n")
    if text.endswith("\r"):
        text = text[:-1]
    if not text.strip():
        raise ParseError("empty line", line_no)
    parts = text.split("\t")
    if len(parts) != 3:
        raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", line_no)
    ts_text, client_id, doc_id = parts
    _check_token(client_id, "client_id", line_no)
    _check_token(doc_id, "doc_id", line_no)
    if not ts_text.isascii() or not ts_text.isdigit():
        raise ParseError(f"non-integer timestamp {ts_text!r}", line_no)
    return AccessEvent(int(ts_text), client_id, doc_id)


def format_access_line(event: AccessEvent) -> str:
    return f"{event.timestamp}\t{event.client_id}\t{event.doc_id}\n"


def read_access_log(lines: Iterable[str]) -> Iterator[AccessEvent]:
    """Parse an access log stream. Blank lines are errors, not skipped.

    Repeated client and document ids share one string object.
    """
    intern = sys.intern
    for line_no, line in enumerate(lines, 1):
        ts, client, doc = parse_access_line(line, line_no)
        yield AccessEvent(ts, intern(client), intern(doc))


def sort_events(events: Iterable[AccessEvent]) -> list[AccessEvent]:
    """Sort by ``(client_id, timestamp)``; stable for equal timestamps."""
    return sorted(events, key=lambda e: (e.client_id, e.timestamp))


def check_client_sorted(events) -> None:
    """Raise :class:`ContractError` unless ``events`` is sorted by (client_id, timestamp)."""
    prev = None
    for i, ev in enumerate(events):
        key = (ev.client_id, ev.timestamp)
        if prev is not None and key < prev:
            raise ContractError(
                f"events not sorted by (client_id, timestamp) at position {i}: {key} after {prev}"
            )
        prev = key


def filter_events(events, cfg: FilterConfig) -> list[AccessEvent]:
    """Drop blocked clients and any client over the per-day cap on any day.

    ``events`` must be sorted by ``(client_id, timestamp)``; output keeps
    input order.
    """
    events = list(events)
    check_client_sorted(events)
    cap = cfg.max_events_per_client_per_day
    blocked = set(cfg.blocked_clients)

    # Input is client-sorted, so one client's events are contiguous and
    # days within a client are non-decreasing.
    i, n = 0, len(events)
    while i < n:
        client = events[i].client_id
        j = i
        run_day, run_len = None, 0
        over = client in blocked
        while j < n and events[j].client_id == client:
            if not over:
                day = events[j].timestamp // SECONDS_PER_DAY
                if day == run_day:
                    run_len += 1
                else:
                    run_day, run_len = day, 1
                if run_len > cap:
                    over = True
            j += 1
        if over:
            blocked.add(client)
        i = j
    if not blocked:
        return events
    return [ev for ev in events if ev.client_id not in blocked]


def load_metadata(lines: Iterable[str]) -> dict[str, DocumentMeta]:
    """Parse ``doc_id<TAB>YYYY-MM-DD`` lines into a map keyed by doc_id."""
    meta: dict[str, DocumentMeta] = {}
    for line_no, line in enumerate(lines, 1):
        text = line.rstrip("\r\n")
        if not text:
            raise ParseError("empty line", line_no)
        parts = text.split("\t")
        if len(parts) != 2:
            raise ParseError(f"expected 2 tab-separated fields, got {len(parts)}", line_no)
        doc_id, date_text = parts
        _check_token(doc_id, "doc_id", line_no)
        try:
            pub = parse_date(date_text)
        except ValueError as exc:
            raise ParseError(f"bad date {date_text!r}: {exc}", line_no) from None
        if doc_id in meta:
            raise ParseError(f"duplicate doc_id {doc_id!r}", line_no)
        meta[doc_id] = DocumentMeta(doc_id, pub)
    return meta


def format_metadata_line(meta: DocumentMeta) -> str:
    return f"{meta.doc_id}\t{meta.pub_date.isoformat()}\n"


def load_citations(lines: Iterable[str]) -> list[CitationRecord]:
    """Parse citation lines, dropping duplicate refs and self-references.

    Each removal is logged as a warning on this module's logger.
    """
    records = []
    for line_no, line in enumerate(lines, 1):
        text = line.rstrip("\r\n")
        if not text:
            raise ParseError("empty line", line_no)
        parts = text.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", line_no)
        citing, date_text, refs_text = parts
        _check_token(citing, "citing_doc", line_no)
        try:
            citing_date = parse_date(date_text)
        except ValueError as exc:
            raise ParseError(f"bad date {date_text!r}: {exc}", line_no) from None
        raw = refs_text.split(",") if refs_text else []
        if any(not r for r in raw):
            raise ParseError("empty reference in list", line_no)
        refs: list[str] = []
        seen = set()
        for ref in raw:
            if ref == citing:
                logger.warning("line %d: dropped self-reference %r", line_no, ref)
            elif ref in seen:
                logger.warning("line %d: dropped duplicate reference %r", line_no, ref)
            else:
                seen.add(ref)
                refs.append(ref)
        records.append(CitationRecord(citing, citing_date, tuple(refs)))
    return records


def format_citation_line(rec: CitationRecord) -> str:
    return f"{rec.citing_doc}\t{rec.citing_date.isoformat()}\t{','.join(rec.refs)}\n"

