"""Split each client's access stream into inactivity-gap sessions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .exceptions import ContractError, ParseError
from .logmodel import AccessEvent

DEFAULT_GAP_SECONDS = 1800


@dataclass(frozen=True, slots=True)
class Session:
    client_id: str
    start_ts: int
    end_ts: int
    docs: frozenset[str]

    def __post_init__(self):
        if self.start_ts > self.end_ts:
            raise ValueError(f"session starts after it ends ({self.start_ts} > {self.end_ts})")
        if not self.docs:
            raise ValueError("session has no documents")


def iter_sessions(events: Iterable[AccessEvent], gap_seconds: float = DEFAULT_GAP_SECONDS) -> Iterator[Session]:
    """Lazy form of :func:`sessionize`; checks ordering as it goes."""
    if not (gap_seconds >= 0):
        raise ContractError(f"gap_seconds must be non-negative, got {gap_seconds!r}")
    client = None
    start = last = 0
    docs: set[str] = set()
    for i, (ts, cid, doc) in enumerate(events):
        if cid == client:
            if ts < last:
                raise ContractError(f"events not sorted by (client_id, timestamp) at position {i}")
            if ts - last > gap_seconds:
                yield Session(client, start, last, frozenset(docs))
                start, docs = ts, set()
        else:
            if client is not None:
                if cid < client:
                    raise ContractError(f"events not sorted by (client_id, timestamp) at position {i}")
                yield Session(client, start, last, frozenset(docs))
            client, start, docs = cid, ts, set()
        last = ts
        docs.add(doc)
    if client is not None:
        yield Session(client, start, last, frozenset(docs))


def sessionize(events: Iterable[AccessEvent], gap_seconds: float = DEFAULT_GAP_SECONDS) -> list[Session]:
    """Group client-sorted events into sessions.

    A new session begins whenever consecutive events of one client are more
    than ``gap_seconds`` apart. ``math.inf`` yields one session per client.
    Output is ordered by ``(client_id, start_ts)``.
    """
    return list(iter_sessions(events, gap_seconds))


def format_session_line(session: Session) -> str:
    docs = ",".join(sorted(session.docs))
    return f"{session.client_id}\t{session.start_ts}\t{session.end_ts}\t{docs}\n"


def parse_session_line(line: str, line_no: int | None = None) -> Session:
    parts = line.rstrip("\r\n").split("\t")
    if len(parts) != 4:
        raise ParseError(f"expected 4 tab-separated fields, got {len(parts)}", line_no)
    client, start, end, docs = parts
    if not (start.isdigit() and end.isdigit()):
        raise ParseError("non-integer session bounds", line_no)
    doc_list = docs.split(",") if docs else []
    if not client or not doc_list or any(not d for d in doc_list):
        raise ParseError("empty field in session record", line_no)
    try:
        return Session(client, int(start), int(end), frozenset(doc_list))
    except ValueError as exc:
        raise ParseError(str(exc), line_no) from None


def read_sessions(lines: Iterable[str]) -> list[Session]:
    return [parse_session_line(line, no) for no, line in enumerate(lines, 1)]


INFINITE_GAP = math.inf
